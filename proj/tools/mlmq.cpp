// Command-line driver: solve, verify, bench, features, select, train, gen.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlmq/adaptive.hpp"
#include "mlmq/engine.hpp"
#include "mlmq/error.hpp"
#include "mlmq/features.hpp"
#include "mlmq/graph.hpp"
#include "mlmq/oracle.hpp"

using nlohmann::json;
using namespace mlmq;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitError = 2;
constexpr std::size_t kInlineDistanceCap = 1'000'000;

std::uint32_t default_groups() {
  if (const char* s = std::getenv("MLMQ_GROUPS")) {
    try {
      const long v = std::stol(s);
      if (v >= 1) return static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::kInvalidParameter, "MLMQ_GROUPS must be a positive integer");
  }
  return 4;
}

struct GraphArgs {
  std::string path;
  std::string format;
  std::string gen;
  std::uint64_t seed = 1;
  Weight min_weight = 1;
  Weight max_weight = 100;
  double weight_scale = 1000.0;

  void add(CLI::App& app, bool required = true) {
    auto* g = app.add_option("--graph", path, "Graph file (.gr DIMACS or .mtx Matrix Market)");
    auto* s = app.add_option("--gen", gen, "Generator spec: grid2d:RxC, mesh:RxC, path:N, rmat:S[:EF], random:N:M");
    g->excludes(s);
    s->excludes(g);
    if (required) app.callback([this] {
        if (path.empty() && gen.empty()) throw CLI::RequiredError("--graph or --gen");
      });
    app.add_option("--format", format, "Override the format implied by the file extension (dimacs|mtx)");
    app.add_option("--seed", seed, "Generator seed")->capture_default_str();
    app.add_option("--min-weight", min_weight, "Smallest generated weight")->capture_default_str();
    app.add_option("--max-weight", max_weight, "Largest generated weight")->capture_default_str();
    app.add_option("--weight-scale", weight_scale, "Scale for real Matrix Market weights")->capture_default_str();
  }

  std::string origin() const { return path.empty() ? "gen:" + gen : path; }

  CsrGraph load() const {
    if (!gen.empty()) {
      GeneratorSpec spec = parse_generator_spec(gen);
      spec.params.min_weight = min_weight;
      spec.params.max_weight = max_weight;
      return generate_graph(spec.kind, spec.params, seed);
    }
    LoadOptions opts;
    opts.real_weight_scale = weight_scale;
    const GraphFormat f = format.empty() ? format_from_path(path) : parse_graph_format(format);
    return load_graph(path, f, opts);
  }
};

// Every config field is addressable; unset options leave the derived value.
struct ConfigArgs {
  std::optional<std::string> l1, l2;
  std::optional<std::uint32_t> groups, lanes, th_v, l0_cap, l1_cap, wb, block_size, block_num, bmax,
      bnum, node_batch, node_capacity, pnum;
  std::optional<Distance> delta_nf, filter_window, delta;
  std::optional<double> delta_nf_factor, filter_factor, delta_factor;
  std::string model;
  bool no_dup_elim = false;
  std::uint64_t watchdog_ms = 60000;

  void add(CLI::App& app) {
    app.add_option("--l1", l1, "L1 queue: vector|near_far|filter|slf");
    app.add_option("--l2", l2, "L2 queue: fifo|bucket|priority|multi");
    app.add_option("--groups", groups, "Worker groups (default: $MLMQ_GROUPS or 4)");
    app.add_option("--lanes", lanes, "Lanes per group");
    app.add_option("--th-v", th_v, "Degree threshold for cooperative expansion");
    app.add_option("--l0-cap", l0_cap, "L0 capacity per lane");
    app.add_option("--l1-cap", l1_cap, "L1 capacity per group");
    app.add_option("--wb", wb, "L1 vector flush period (0 disables)");
    app.add_option("--delta-nf", delta_nf, "Near-far threshold step (absolute)");
    app.add_option("--delta-nf-factor", delta_nf_factor, "Near-far step as a multiple of the mean weight");
    app.add_option("--filter-window", filter_window, "Filter window (absolute)");
    app.add_option("--filter-factor", filter_factor, "Filter window as a multiple of the mean weight");
    app.add_option("--block-size", block_size, "FIFO block size");
    app.add_option("--block-num", block_num, "FIFO ring blocks");
    app.add_option("--delta", delta, "Bucket width (absolute)");
    app.add_option("--delta-factor", delta_factor, "Bucket width as a multiple of the mean weight");
    app.add_option("--bmax", bmax, "Bucket count");
    app.add_option("--bnum", bnum, "Leading buckets eligible for reads");
    app.add_option("--node-batch", node_batch, "Heap node batch size");
    app.add_option("--node-capacity", node_capacity, "Heap node capacity");
    app.add_option("--pnum", pnum, "Heaps in the multi-queue");
    app.add_option("--model", model, "Selector model; picks the queue types when --l1/--l2 are absent");
    app.add_flag("--no-dup-elim", no_dup_elim, "Keep stale elements instead of dropping them");
    app.add_option("--watchdog-ms", watchdog_ms, "Abort runs longer than this")->capture_default_str();
  }

  bool explicit_types() const { return l1.has_value() || l2.has_value(); }

  void apply_params(MlmqConfig& c) const {
    if (l1) c.l1_type = parse_l1_type(*l1);
    if (l2) c.l2_type = parse_l2_type(*l2);
    if (lanes) c.lanes_per_group = *lanes;
    if (th_v) c.th_v = *th_v;
    if (l0_cap) c.l0_capacity = *l0_cap;
    if (l1_cap) c.l1.capacity = *l1_cap;
    if (wb) c.l1.wb = *wb;
    if (delta_nf) c.l1.delta_nf = *delta_nf;
    if (delta_nf_factor) c.l1.delta_nf_factor = *delta_nf_factor;
    if (filter_window) c.l1.filter_window = *filter_window;
    if (filter_factor) c.l1.filter_factor = *filter_factor;
    if (block_size) c.l2.block_size = *block_size;
    if (block_num) c.l2.block_num = *block_num;
    if (delta) c.l2.delta = *delta;
    if (delta_factor) c.l2.delta_factor = *delta_factor;
    if (bmax) c.l2.bmax = *bmax;
    if (bnum) c.l2.bnum = *bnum;
    if (node_batch) c.l2.node_batch = *node_batch;
    if (node_capacity) c.l2.node_capacity = *node_capacity;
    if (pnum) c.l2.pnum = *pnum;
  }

  MlmqConfig base() const {
    MlmqConfig c;
    c.num_groups = groups ? *groups : default_groups();
    return c;
  }

  // Explicit flags, else the model's top pick, else the rules.
  std::pair<MlmqConfig, std::string> resolve_for(const CsrGraph& g) const {
    MlmqConfig c = base();
    std::string source = "explicit";
    if (!explicit_types()) {
      const GraphFeatures f = extract_features(g);
      if (!model.empty()) {
        const SelectorModel m = load_model(model);
        const auto candidates = enumerate_candidates(default_grid(), c);
        c = select_config(f, &m, candidates).front();
        source = "model";
      } else {
        c = select_rule_based(f, c);
        source = "rule-based";
      }
    }
    apply_params(c);
    c.validate();
    return {c, source};
  }

  EngineConfig engine() const {
    EngineConfig e;
    e.duplicate_elimination = !no_dup_elim;
    e.watchdog = std::chrono::milliseconds(watchdog_ms);
    return e;
  }
};

json distances_json(const std::vector<Distance>& d) {
  json a = json::array();
  for (Distance v : d) a.push_back(v == kInfinity ? json(nullptr) : json(v));
  return a;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + out_path + "'");
  out << j.dump(2) << '\n';
}

void header(const MlmqConfig& c, const std::string& source) {
  std::cerr << "# config " << c.label() << " groups=" << c.num_groups << " (" << source << ")\n";
}

json graph_json(const CsrGraph& g, const GraphArgs& ga) {
  return {{"origin", ga.origin()}, {"vertices", g.num_vertices()}, {"edges", g.num_edges()}};
}

std::size_t reachable(const std::vector<Distance>& d) {
  std::size_t n = 0;
  for (Distance v : d) n += v != kInfinity;
  return n;
}

struct SolveArgs {
  GraphArgs graph;
  ConfigArgs cfg;
  std::uint64_t source = 0;
  bool bfs = false;
  std::string output;
  std::size_t inline_cap = kInlineDistanceCap;
  bool no_distances = false;
};

void add_solve_options(CLI::App& app, SolveArgs& a) {
  a.graph.add(app);
  a.cfg.add(app);
  app.add_option("--source", a.source, "Source vertex (0-based)")->capture_default_str();
  app.add_flag("--bfs", a.bfs, "Treat every edge weight as 1");
  app.add_option("--output,-o", a.output, "Write the JSON result here instead of stdout");
}

SsspResult run(const SolveArgs& a, const CsrGraph& g, std::string& source_kind) {
  if (a.source >= g.num_vertices())
    throw Error(ErrorKind::kInvalidSource, "source " + std::to_string(a.source) +
                                               " out of range for graph with " +
                                               std::to_string(g.num_vertices()) + " vertices");
  auto [cfg, kind] = a.cfg.resolve_for(g);
  source_kind = kind;
  header(cfg, kind);
  const auto src = static_cast<VertexId>(a.source);
  return a.bfs ? bfs_solve(g, src, cfg, a.cfg.engine()) : sssp_solve(g, src, cfg, a.cfg.engine());
}

json audit_json(const RunAudit& a) {
  return {{"ok", a.ok()}, {"global_reserve", a.global_reserve}, {"global_done", a.global_done}};
}

int cmd_solve(const SolveArgs& a) {
  const CsrGraph g = a.graph.load();
  std::string kind;
  const SsspResult r = run(a, g, kind);
  json j = {{"command", "solve"},
            {"mode", a.bfs ? "bfs" : "sssp"},
            {"graph", graph_json(g, a.graph)},
            {"source", a.source},
            {"config_source", kind},
            {"config_used", to_json(r.config_used)},
            {"metrics", to_json(r.metrics)},
            {"audit", audit_json(r.audit)},
            {"reachable", reachable(r.distances)}};
  if (a.no_distances) {
    // metrics only
  } else if (r.distances.size() > a.inline_cap) {
    const std::string side = (a.output.empty() ? std::string("distances") : a.output) + ".dist.bin";
    std::ofstream out(side, std::ios::binary);
    if (!out) throw Error(ErrorKind::kIo, "cannot write '" + side + "'");
    out.write(reinterpret_cast<const char*>(r.distances.data()),
              static_cast<std::streamsize>(r.distances.size() * sizeof(Distance)));
    j["distances_file"] = side;
  } else {
    j["distances"] = distances_json(r.distances);
  }
  emit(j, a.output);
  return 0;
}

int cmd_verify(const SolveArgs& a, std::int64_t inject_fault) {
  const CsrGraph g = a.graph.load();
  std::string kind;
  SsspResult r = run(a, g, kind);
  const auto src = static_cast<VertexId>(a.source);
  const auto expected = a.bfs ? dijkstra_oracle(g.with_unit_weights(), src) : dijkstra_oracle(g, src);
  if (inject_fault >= 0 && static_cast<std::size_t>(inject_fault) < r.distances.size())
    r.distances[inject_fault] = r.distances[inject_fault] == kInfinity ? 0 : r.distances[inject_fault] + 1;
  const auto mismatch = find_first_mismatch(expected, r.distances);
  json j = {{"command", "verify"},
            {"mode", a.bfs ? "bfs" : "sssp"},
            {"graph", graph_json(g, a.graph)},
            {"source", a.source},
            {"config_source", kind},
            {"config_used", to_json(r.config_used)},
            {"ok", !mismatch.has_value() && r.audit.ok()},
            {"audit_ok", r.audit.ok()},
            {"metrics", to_json(r.metrics)},
            {"audit", audit_json(r.audit)},
            {"reachable", reachable(r.distances)},
            {"first_mismatch", nullptr}};
  if (mismatch) {
    auto val = [](Distance d) { return d == kInfinity ? json(nullptr) : json(d); };
    j["first_mismatch"] = {{"vertex", mismatch->vertex},
                           {"expected", val(mismatch->expected)},
                           {"actual", val(mismatch->actual)}};
    std::cerr << "mismatch at vertex " << mismatch->vertex << ": expected "
              << val(mismatch->expected).dump() << ", got " << val(mismatch->actual).dump() << '\n';
  }
  emit(j, a.output);
  return j["ok"].get<bool>() ? 0 : kExitMismatch;
}

struct BenchArgs {
  std::vector<std::string> graphs;
  std::vector<std::string> gens;
  std::string grid;
  std::string out;
  std::uint32_t repeats = 3;
  std::uint64_t seed = 1;
  Weight min_weight = 1, max_weight = 100;
  std::optional<std::uint32_t> groups;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<NamedGraph> graphs;
  for (const auto& p : a.graphs) graphs.push_back({p, load_graph(p, format_from_path(p)), 0});
  for (std::size_t i = 0; i < a.gens.size(); ++i) {
    GeneratorSpec spec = parse_generator_spec(a.gens[i]);
    spec.params.min_weight = a.min_weight;
    spec.params.max_weight = a.max_weight;
    graphs.push_back({a.gens[i] + "#" + std::to_string(a.seed + i),
                      generate_graph(spec.kind, spec.params, a.seed + i), 0});
  }
  if (graphs.empty()) throw Error(ErrorKind::kInvalidParameter, "bench needs --graph or --gen");
  ParameterGrid grid = default_grid();
  if (!a.grid.empty()) {
    std::ifstream in(a.grid);
    if (!in) throw Error(ErrorKind::kIo, "cannot open '" + a.grid + "'");
    try {
      grid = grid_from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse, std::string("grid file: ") + e.what());
    }
  }
  MlmqConfig base;
  base.num_groups = a.groups ? *a.groups : default_groups();
  const auto candidates = enumerate_candidates(grid, base);
  EngineConfig engine;
  engine.seed = a.seed;
  const auto records = collect_records(graphs, candidates, engine, a.repeats);
  if (a.out.empty()) {
    write_records_csv(records, std::cout);
  } else {
    std::ofstream out(a.out);
    if (!out) throw Error(ErrorKind::kIo, "cannot write '" + a.out + "'");
    write_records_csv(records, out);
  }
  std::map<std::string, const BenchmarkRecord*> best;
  for (const auto& r : records)
    if (r.relative_performance == 1.0 && !best.count(r.graph_id)) best[r.graph_id] = &r;
  for (const auto& [id, r] : best)
    std::cerr << "# best " << id << ": " << r->candidate.config.label() << " ("
              << r->wall_time_us << " us)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-level queue SSSP engine"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve SSSP (or BFS) and print JSON");
  add_solve_options(*solve, solve_args);
  solve->add_option("--inline-cap", solve_args.inline_cap,
                    "Above this many vertices distances go to a binary sidecar file")
      ->capture_default_str();
  solve->add_flag("--no-distances", solve_args.no_distances, "Omit distances from the output");

  SolveArgs verify_args;
  std::int64_t inject_fault = -1;
  auto* verify = app.add_subcommand("verify", "Solve and compare against Dijkstra");
  add_solve_options(*verify, verify_args);
  verify->add_option("--inject-fault", inject_fault)->group("");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time every candidate config on every graph; CSV out");
  bench->add_option("--graph", bench_args.graphs, "Graph files")->expected(0, -1);
  bench->add_option("--gen", bench_args.gens, "Generator specs")->expected(0, -1);
  bench->add_option("--grid", bench_args.grid, "Candidate grid JSON (default grid if absent)");
  bench->add_option("--out,-o", bench_args.out, "CSV output path (stdout if absent)");
  bench->add_option("--repeats", bench_args.repeats, "Runs per (graph, config); median kept")
      ->capture_default_str();
  bench->add_option("--seed", bench_args.seed, "Seed of the first generated graph")->capture_default_str();
  bench->add_option("--min-weight", bench_args.min_weight)->capture_default_str();
  bench->add_option("--max-weight", bench_args.max_weight)->capture_default_str();
  bench->add_option("--groups", bench_args.groups, "Worker groups (default: $MLMQ_GROUPS or 4)");

  GraphArgs feat_graph;
  std::string feat_out;
  auto* features = app.add_subcommand("features", "Print graph features as JSON");
  feat_graph.add(*features);
  features->add_option("--output,-o", feat_out, "Output path");

  GraphArgs sel_graph;
  std::string sel_model, sel_out;
  std::size_t sel_top = 0;
  std::optional<std::uint32_t> sel_groups;
  auto* select = app.add_subcommand("select", "Rank candidate configs for a graph");
  sel_graph.add(*select);
  select->add_option("--model", sel_model, "Selector model (rules if absent)");
  select->add_option("--top", sel_top, "Keep only the first N (0 = all)");
  select->add_option("--groups", sel_groups, "Worker groups (default: $MLMQ_GROUPS or 4)");
  select->add_option("--output,-o", sel_out, "Output path");

  std::string train_records, train_out;
  ForestParams forest;
  auto* train = app.add_subcommand("train", "Fit a selector model on benchmark records");
  train->add_option("--records", train_records, "Records CSV from bench")->required();
  train->add_option("--out,-o", train_out, "Model file")->required();
  train->add_option("--trees", forest.trees)->capture_default_str();
  train->add_option("--depth", forest.max_depth)->capture_default_str();
  train->add_option("--min-leaf", forest.min_leaf)->capture_default_str();
  train->add_option("--seed", forest.seed)->capture_default_str();

  GraphArgs gen_graph;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a generated graph to a file");
  gen_graph.add(*gen);
  gen->add_option("--out,-o", gen_out, "Output path (.gr or .mtx)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump() << '\n';
    return kExitError;
  }

  try {
    if (*solve) return cmd_solve(solve_args);
    if (*verify) return cmd_verify(verify_args, inject_fault);
    if (*bench) return cmd_bench(bench_args);
    if (*features) {
      const CsrGraph g = feat_graph.load();
      emit({{"command", "features"}, {"graph", graph_json(g, feat_graph)},
            {"features", to_json(extract_features(g))}},
           feat_out);
      return 0;
    }
    if (*select) {
      const CsrGraph g = sel_graph.load();
      const GraphFeatures f = extract_features(g);
      MlmqConfig base;
      base.num_groups = sel_groups ? *sel_groups : default_groups();
      const auto candidates = enumerate_candidates(default_grid(), base);
      std::optional<SelectorModel> model;
      if (!sel_model.empty()) model = load_model(sel_model);
      auto ranked = select_config(f, model ? &*model : nullptr, candidates);
      if (sel_top > 0 && ranked.size() > sel_top) ranked.resize(sel_top);
      json list = json::array();
      for (const auto& c : ranked) {
        json entry = {{"label", c.label()}, {"config", to_json(c)}};
        if (model) entry["predicted_rp"] = model->predict(f, ConfigCandidate{c, encode_config(c)});
        list.push_back(entry);
      }
      emit({{"command", "select"}, {"graph", graph_json(g, sel_graph)},
            {"features", to_json(f)}, {"source", model ? "model" : "rule-based"},
            {"ranked", list}},
           sel_out);
      return 0;
    }
    if (*train) {
      std::ifstream in(train_records);
      if (!in) throw Error(ErrorKind::kIo, "cannot open '" + train_records + "'");
      const auto records = read_records_csv(in);
      const SelectorModel m = train_selector(records, forest);
      save_model(m, train_out);
      std::cout << json{{"command", "train"}, {"records", records.size()}, {"trees", m.tree_count},
                        {"max_depth", m.max_depth}, {"seed", m.seed},
                        {"corpus_hash", m.corpus_hash}, {"model", train_out}}
                       .dump(2)
                << '\n';
      return 0;
    }
    if (*gen) {
      const CsrGraph g = gen_graph.load();
      save_graph(g, gen_out, format_from_path(gen_out));
      std::cerr << "# wrote " << g.num_vertices() << " vertices, " << g.num_edges() << " edges to "
                << gen_out << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cout << json{{"error", {{"kind", std::string(to_string(e.kind())).c_str()}, {"message", e.what()}}}}.dump()
              << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cout << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << '\n';
    return kExitError;
  }
  return kExitError;
}
