// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. `--only N` runs a single criterion.
#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mlmq/adaptive.hpp"
#include "mlmq/engine.hpp"
#include "mlmq/error.hpp"
#include "mlmq/features.hpp"
#include "mlmq/graph.hpp"
#include "mlmq/l2_queue.hpp"
#include "mlmq/oracle.hpp"

using namespace mlmq;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool verbose() { return std::getenv("MLMQ_ACCEPTANCE_VERBOSE") != nullptr; }

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- the seeded graph set shared by criteria 1, 2, 6 and 8 --------------------

struct TestGraph {
  std::string id;
  CsrGraph g;
  std::vector<VertexId> sources;
};

std::vector<TestGraph> matrix_graphs() {
  std::vector<TestGraph> out;
  std::mt19937_64 rng(20240601);
  const GeneratorKind kinds[] = {GeneratorKind::kGrid2d, GeneratorKind::kPath,
                                 GeneratorKind::kRandomUniform, GeneratorKind::kRmat};
  for (int i = 0; i < 100; ++i) {
    const GeneratorKind kind = kinds[i % 4];
    GeneratorParams p;
    p.min_weight = 1;
    p.max_weight = (i / 4) % 2 ? 1000 : 100;
    std::string id;
    switch (kind) {
      case GeneratorKind::kGrid2d:
        p.rows = 10 + static_cast<std::uint32_t>(rng() % 91);
        p.cols = 10 + static_cast<std::uint32_t>(rng() % 91);
        p.diagonals = (i / 4) % 3 == 2;
        id = fmt("%s:%ux%u", p.diagonals ? "mesh" : "grid2d", p.rows, p.cols);
        break;
      case GeneratorKind::kPath:
        p.num_vertices = 100 + static_cast<std::uint32_t>(rng() % 9901);
        id = fmt("path:%u", p.num_vertices);
        break;
      case GeneratorKind::kRandomUniform:
        p.num_vertices = 200 + static_cast<std::uint32_t>(rng() % 9801);
        p.num_edges = p.num_vertices * (2 + rng() % 7);
        id = fmt("random:%u:%llu", p.num_vertices, static_cast<unsigned long long>(p.num_edges));
        break;
      case GeneratorKind::kRmat:
        p.scale = 8 + static_cast<std::uint32_t>(rng() % 6);  // up to 8192 vertices
        p.edge_factor = 4 + static_cast<std::uint32_t>(rng() % 9);
        id = fmt("rmat:%u:%u", p.scale, p.edge_factor);
        break;
    }
    TestGraph t{id + fmt("/w%u", p.max_weight), generate_graph(kind, p, 1000 + i), {}};
    const auto n = static_cast<VertexId>(t.g.num_vertices());
    t.sources = {0, static_cast<VertexId>(rng() % n)};
    if (t.sources[1] == 0) t.sources[1] = n - 1;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<MlmqConfig> default_configs() {
  std::vector<MlmqConfig> out;
  for (const auto& c : enumerate_candidates(default_grid())) out.push_back(c.config);
  return out;
}

// Criteria 1, 2 and 6 share one pass over the matrix.
struct MatrixResult {
  std::size_t runs = 0, graphs = 0, configs = 0;
  std::size_t mismatches = 0, audit_failures = 0, watchdog_failures = 0, schedule_diffs = 0;
  std::size_t other_errors = 0;
  double max_run_s = 0, elapsed_s = 0;
  std::string first_problem;
};

const MatrixResult& matrix_result() {
  static const MatrixResult r = [] {
    MatrixResult m;
    const auto t0 = std::chrono::steady_clock::now();
    const auto graphs = matrix_graphs();
    const auto configs = default_configs();
    m.graphs = graphs.size();
    m.configs = configs.size();
    EngineConfig eng;
    eng.watchdog = std::chrono::milliseconds(60000);
    auto note = [&](const std::string& s) {
      if (m.first_problem.empty()) m.first_problem = s;
    };
    for (const auto& t : graphs) {
      for (VertexId s : t.sources) {
        const auto want = dijkstra_oracle(t.g, s);
        for (const auto& base : configs) {
          std::vector<Distance> first;
          for (std::uint32_t groups : {1u, 2u, 8u}) {
            MlmqConfig c = base;
            c.num_groups = groups;
            const std::string where =
                fmt("%s src=%u %s groups=%u", t.id.c_str(), s, c.label().c_str(), groups);
            ++m.runs;
            try {
              const auto r0 = std::chrono::steady_clock::now();
              const SsspResult r = sssp_solve(t.g, s, c, eng);
              m.max_run_s = std::max(m.max_run_s, seconds_since(r0));
              if (r.distances != want) {
                ++m.mismatches;
                const auto mm = find_first_mismatch(want, r.distances);
                note(where + fmt(": vertex %u differs", mm ? mm->vertex : 0));
              }
              if (!r.audit.ok()) {
                ++m.audit_failures;
                note(where + ": audit failed");
              }
              if (first.empty())
                first = r.distances;
              else if (first.size() != r.distances.size() ||
                       std::memcmp(first.data(), r.distances.data(),
                                   first.size() * sizeof(Distance)) != 0) {
                ++m.schedule_diffs;
                note(where + ": differs from groups=1");
              }
            } catch (const Error& e) {
              if (e.kind() == ErrorKind::kWatchdog)
                ++m.watchdog_failures;
              else
                ++m.other_errors;
              note(where + ": " + e.what());
            }
          }
        }
      }
    }
    m.elapsed_s = seconds_since(t0);
    return m;
  }();
  return r;
}

Outcome criterion1() {
  const auto& m = matrix_result();
  const bool ok = m.mismatches == 0 && m.other_errors == 0 && m.watchdog_failures == 0 &&
                  m.graphs >= 100 && m.configs >= 12;
  std::string d = fmt("%zu graphs x %zu configs x 2 sources x groups{1,2,8} = %zu runs, "
                      "%zu mismatches, %.0fs",
                      m.graphs, m.configs, m.runs, m.mismatches, m.elapsed_s);
  if (!ok && !m.first_problem.empty()) d += "; first: " + m.first_problem;
  return {ok, d};
}

Outcome criterion2() {
  const auto& m = matrix_result();
  const bool ok = m.audit_failures == 0 && m.watchdog_failures == 0 && m.other_errors == 0;
  std::string d = fmt("%zu runs, %zu audit failures, %zu watchdog trips, longest run %.2fs",
                      m.runs, m.audit_failures, m.watchdog_failures, m.max_run_s);
  if (!ok && !m.first_problem.empty()) d += "; first: " + m.first_problem;
  return {ok, d};
}

Outcome criterion6() {
  const auto& m = matrix_result();
  const bool ok = m.schedule_diffs == 0 && m.other_errors == 0 && m.watchdog_failures == 0;
  return {ok, fmt("%zu inputs compared across groups{1,2,8}, %zu differ", m.runs / 3,
                  m.schedule_diffs)};
}

// --- 3: concurrent L2 stress ----------------------------------------------------

struct StressReport {
  bool multiset_ok = false;
  bool discipline_ok = false;
  std::size_t checkpoints = 0;
  double seconds = 0;
};

StressReport stress_l2(L2Type type) {
  constexpr std::uint32_t kWriters = 8, kReaders = 8, kPhases = 4;
  constexpr std::size_t kTotal = 1'000'000, kBatch = 32;
  constexpr std::size_t kPerWriterPhase = kTotal / kWriters / kPhases;
  static_assert(kPerWriterPhase * kWriters * kPhases == kTotal);

  MlmqConfig c;
  c.l2_type = type;
  c.num_groups = kWriters + kReaders;
  c.l2.pnum = 4;
  c.l2.node_capacity = 1u << 16;
  // Rings are bounded; size them so one bucket can hold the whole stream.
  c.l2.block_num = 1u << 15;
  c = resolve(c, 1000.0, kTotal);
  TerminationCounters counters(c.num_groups);
  auto q = make_l2_queue(c, counters, L2Options{c.num_groups, std::chrono::milliseconds(30000)});

  std::atomic<std::uint32_t> writers_done{0};
  std::atomic<bool> discipline_ok{true};
  std::size_t checkpoints = 0;
  std::barrier sync(kWriters + kReaders, [&]() noexcept {
    // Every thread is parked: the queue is quiescent.
    ++checkpoints;
    if (!q->discipline_holds()) discipline_ok = false;
  });

  std::vector<std::vector<Element>> written(kWriters), read(kReaders);
  std::vector<std::thread> threads;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint32_t w = 0; w < kWriters; ++w) {
    threads.emplace_back([&, w] {
      std::mt19937_64 rng(77 + w);
      std::uniform_int_distribution<Distance> dist(0, 64'000);
      std::uint64_t ops = 0;
      std::vector<Element> batch;
      VertexId next = w * static_cast<VertexId>(kTotal / kWriters);
      for (std::uint32_t p = 0; p < kPhases; ++p) {
        for (std::size_t k = 0; k < kPerWriterPhase; k += kBatch) {
          batch.clear();
          for (std::size_t j = k; j < std::min(k + kBatch, kPerWriterPhase); ++j)
            batch.push_back({next++, dist(rng)});
          q->write(w, batch, ops);
          written[w].insert(written[w].end(), batch.begin(), batch.end());
        }
        writers_done.fetch_add(1);
        sync.arrive_and_wait();
      }
    });
  }
  for (std::uint32_t r = 0; r < kReaders; ++r) {
    threads.emplace_back([&, r] {
      const GroupId g = kWriters + r;
      std::uint64_t ops = 0;
      for (std::uint32_t p = 0; p < kPhases; ++p) {
        while (writers_done.load() < kWriters * (p + 1)) {
          if (q->read(g, 64, read[r], ops) == ReadStatus::kReadEmpty) std::this_thread::yield();
        }
        sync.arrive_and_wait();
      }
      // Drain after the last checkpoint, all readers together.
      while (!counters.is_empty()) {
        if (q->read(g, 64, read[r], ops) == ReadStatus::kReadEmpty) std::this_thread::yield();
      }
    });
  }
  for (auto& t : threads) t.join();

  auto flatten = [](std::vector<std::vector<Element>>& parts) {
    std::vector<Element> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end(), [](const Element& a, const Element& b) {
      return a.id != b.id ? a.id < b.id : a.dist < b.dist;
    });
    return all;
  };
  const auto in = flatten(written), out = flatten(read);
  StressReport rep;
  rep.multiset_ok = in.size() == kTotal && in == out && q->empty();
  rep.discipline_ok = discipline_ok && q->discipline_holds();
  rep.checkpoints = checkpoints;
  rep.seconds = seconds_since(t0);
  return rep;
}

Outcome criterion3() {
  bool ok = true;
  std::string d;
  for (L2Type t : {L2Type::kFifo, L2Type::kBucket, L2Type::kPriority, L2Type::kMulti}) {
    std::fprintf(stderr, "# stress %s\n", std::string(to_string(t)).c_str());
    const StressReport r = stress_l2(t);
    const bool v = r.multiset_ok && r.discipline_ok && r.checkpoints == 4 && r.seconds < 120;
    ok &= v;
    d += fmt("%s%s: multiset %s, discipline %s, %zu checkpoints, %.1fs", d.empty() ? "" : "; ",
             std::string(to_string(t)).c_str(), r.multiset_ok ? "ok" : "BAD",
             r.discipline_ok ? "ok" : "BAD", r.checkpoints, r.seconds);
  }
  return {ok, "8 writers x 8 readers x 10^6 elements; " + d};
}

// --- 4: periodic flush versus none -----------------------------------------------

Outcome criterion4() {
  std::size_t trials = 0, wins = 0;
  std::vector<double> ratios, grid_ratios;
  for (int i = 0; i < 20; ++i) {
    GeneratorParams p;
    p.min_weight = 1;
    p.max_weight = 100;
    GeneratorKind kind;
    if (i % 2 == 0) {
      kind = GeneratorKind::kPath;
      p.num_vertices = 2000 + 400 * i;
    } else {
      kind = GeneratorKind::kGrid2d;
      p.rows = 40 + 4 * i;
      p.cols = 40 + 3 * i;
    }
    const CsrGraph g = generate_graph(kind, p, 4000 + i);
    MlmqConfig c;
    c.l1_type = L1Type::kVector;
    c.l2_type = L2Type::kFifo;
    c.num_groups = 4;
    c.l1.wb = 8;
    const auto flushed = sssp_solve(g, 0, c).metrics.relaxations;
    c.l1.wb = 0;
    const auto unflushed = sssp_solve(g, 0, c).metrics.relaxations;
    ++trials;
    wins += flushed <= unflushed;
    ratios.push_back(static_cast<double>(flushed) / static_cast<double>(unflushed));
    if (verbose())
      std::fprintf(stderr, "#   %s n=%zu wb8=%llu wb0=%llu\n", kind == GeneratorKind::kPath ? "path" : "grid",
                   g.num_vertices(), static_cast<unsigned long long>(flushed),
                   static_cast<unsigned long long>(unflushed));
    if (kind == GeneratorKind::kGrid2d) grid_ratios.push_back(ratios.back());
  }
  const bool ok = wins * 10 >= trials * 8;
  // A chain from its end has a single shortest-path order, so paths tie.
  return {ok, fmt("wb=8 <= no-flush relaxations on %zu/%zu trials, median ratio %.3f "
                  "(grids only %.3f)",
                  wins, trials, median(ratios), median(grid_ratios))};
}

// --- 5: bucket versus FIFO work --------------------------------------------------

Outcome criterion5() {
  std::size_t trials = 0, wins = 0;
  std::vector<double> ratios;
  for (int i = 0; i < 20; ++i) {
    GeneratorParams p;
    p.min_weight = 1;
    if (i % 2 == 0) {
      // square grid, moderate weight spread
      p.rows = p.cols = 100 + 5 * i;
      p.max_weight = 100;
    } else {
      // long, narrow road-like strip with a wide weight spread
      p.rows = 40 + i;
      p.cols = 260 + 10 * i;
      p.max_weight = 1000;
    }
    const CsrGraph g = generate_graph(GeneratorKind::kGrid2d, p, 5000 + i);
    MlmqConfig c;
    c.l1_type = L1Type::kVector;
    c.num_groups = 4;
    c.l2.delta_factor = 1.0;
    // Work varies with thread interleaving; each side is the median of 3 runs.
    auto work = [&](L2Type t) {
      c.l2_type = t;
      std::vector<double> v;
      for (int k = 0; k < 3; ++k) v.push_back(static_cast<double>(sssp_solve(g, 0, c).metrics.relaxations));
      return median(v);
    };
    const double bucket = work(L2Type::kBucket);
    const double fifo = work(L2Type::kFifo);
    ++trials;
    wins += bucket < fifo;
    ratios.push_back(bucket / fifo);
  }
  const bool ok = wins * 10 >= trials * 8;
  return {ok, fmt("bucket < fifo relaxations (median of 3 runs) on %zu/%zu graphs (>= 10^4 "
                  "vertices), median ratio %.3f",
                  wins, trials, median(ratios))};
}

// --- 7: adaptive selection -------------------------------------------------------

std::vector<NamedGraph> selection_corpus() {
  std::vector<NamedGraph> out;
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 70; ++i) {
    GeneratorParams p;
    p.min_weight = 1;
    p.max_weight = i % 3 == 0 ? 1000 : 100;
    GeneratorKind kind;
    std::string id;
    switch (i % 5) {
      case 0:
        kind = GeneratorKind::kRmat;
        p.scale = 12 + static_cast<std::uint32_t>(rng() % 3);
        p.edge_factor = 4 + static_cast<std::uint32_t>(rng() % 12);
        id = fmt("rmat:%u:%u", p.scale, p.edge_factor);
        break;
      case 1:
        kind = GeneratorKind::kGrid2d;
        p.rows = 60 + static_cast<std::uint32_t>(rng() % 190);
        p.cols = 60 + static_cast<std::uint32_t>(rng() % 190);
        id = fmt("grid2d:%ux%u", p.rows, p.cols);
        break;
      case 2:
        kind = GeneratorKind::kGrid2d;
        p.diagonals = true;
        p.rows = 60 + static_cast<std::uint32_t>(rng() % 190);
        p.cols = 60 + static_cast<std::uint32_t>(rng() % 190);
        id = fmt("mesh:%ux%u", p.rows, p.cols);
        break;
      case 3:
        kind = GeneratorKind::kRandomUniform;
        p.num_vertices = 5000 + static_cast<std::uint32_t>(rng() % 35000);
        p.num_edges = p.num_vertices * (2 + rng() % 10);
        id = fmt("random:%u:%llu", p.num_vertices, static_cast<unsigned long long>(p.num_edges));
        break;
      default:
        kind = GeneratorKind::kPath;
        p.num_vertices = 5000 + static_cast<std::uint32_t>(rng() % 20000);
        id = fmt("path:%u", p.num_vertices);
        break;
    }
    out.push_back({fmt("%02d/", i) + id, generate_graph(kind, p, 7000 + i), 0});
  }
  return out;
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  auto graphs = selection_corpus();
  auto candidates = enumerate_candidates(default_grid());
  for (auto& c : candidates) c.config.num_groups = 2;
  const auto records = collect_records(graphs, candidates, {}, 3);
  if (const char* dump = std::getenv("MLMQ_ACCEPTANCE_RECORDS")) {
    std::ofstream f(dump);
    write_records_csv(records, f);
  }

  // Seeded 70/30 split by graph.
  std::vector<std::string> ids;
  for (const auto& g : graphs) ids.push_back(g.id);
  std::mt19937_64 rng(99);
  std::shuffle(ids.begin(), ids.end(), rng);
  const std::size_t n_train = ids.size() * 7 / 10;
  const std::set<std::string> train_ids(ids.begin(), ids.begin() + n_train);

  std::vector<BenchmarkRecord> train;
  std::map<std::string, std::map<std::string, double>> rp;  // graph -> label -> rp
  std::map<std::string, GraphFeatures> feats;
  for (const auto& r : records) {
    if (train_ids.count(r.graph_id))
      train.push_back(r);
    else {
      rp[r.graph_id][r.candidate.config.label()] = r.relative_performance;
      feats[r.graph_id] = r.features;
    }
  }
  const SelectorModel model = train_selector(train);

  const double n_test = static_cast<double>(rp.size());
  double model_mean = 0;
  std::size_t model_cov = 0;
  for (const auto& [id, by_label] : rp) {
    const std::string pick = select_config(feats[id], &model, candidates).front().label();
    const double v = by_label.at(pick);
    model_mean += v / n_test;
    model_cov += v >= 0.9;
  }
  // The strongest fixed baseline: the config with the best mean on the
  // held-out graphs themselves.
  std::string best_label;
  double best_mean = -1;
  std::size_t best_cov = 0;
  for (const auto& c : candidates) {
    const std::string label = c.config.label();
    double mean = 0;
    std::size_t cov = 0;
    for (const auto& [id, by_label] : rp) {
      mean += by_label.at(label) / n_test;
      cov += by_label.at(label) >= 0.9;
    }
    if (mean > best_mean) {
      best_mean = mean;
      best_cov = cov;
      best_label = label;
    }
  }
  const bool mean_ok = model_mean >= best_mean;
  const bool cov_ok = model_cov > best_cov;
  const bool ok = mean_ok || cov_ok;  // fails only when strictly worse on both
  return {ok, fmt("%zu graphs (%zu train / %zu held out) x %zu configs; model mean rp %.3f vs "
                  "best fixed %s %.3f [%s]; rp>=0.9 on %zu vs %zu graphs [%s]; %.0fs",
                  graphs.size(), n_train, rp.size(), candidates.size(), model_mean,
                  best_label.c_str(), best_mean, mean_ok ? "ok" : "worse", model_cov,
                  best_cov, cov_ok ? "larger" : "not larger", seconds_since(t0))};
}

// --- 8: BFS ----------------------------------------------------------------------

Outcome criterion8() {
  const auto graphs = matrix_graphs();
  const auto configs = default_configs();
  std::size_t runs = 0, bad = 0;
  std::string first;
  for (const auto& t : graphs) {
    const CsrGraph unit = t.g.with_unit_weights();
    for (VertexId s : t.sources) {
      const auto want = dijkstra_oracle(unit, s);
      for (MlmqConfig c : configs) {
        c.num_groups = 2;
        ++runs;
        const SsspResult r = bfs_solve(t.g, s, c);
        if (r.distances != want || !r.audit.ok()) {
          if (bad++ == 0) first = t.id + " " + c.label();
        }
      }
    }
  }
  std::string d = fmt("%zu BFS runs against unit-weight Dijkstra, %zu differ", runs, bad);
  if (bad) d += "; first: " + first;
  return {bad == 0, d};
}

// --- 9: formats ------------------------------------------------------------------

Outcome criterion9() {
  const fs::path dir = MLMQ_FIXTURES_DIR;
  std::size_t files = 0, ok_count = 0;
  std::string failures;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path p = entry.path();
    if (p.extension() != ".gr" && p.extension() != ".mtx") continue;
    ++files;
    try {
      const CsrGraph g = load_graph(p, format_from_path(p));
      bool good = true;
      for (GraphFormat f : {GraphFormat::kDimacs, GraphFormat::kMatrixMarket}) {
        std::stringstream ss;
        if (f == GraphFormat::kDimacs)
          write_dimacs(g, ss);
        else
          write_matrix_market(g, ss);
        const CsrGraph back = f == GraphFormat::kDimacs ? parse_dimacs(ss) : parse_matrix_market(ss);
        good &= back == g;
      }
      if (good) ++ok_count;
      else failures += " " + p.filename().string();
    } catch (const std::exception& e) {
      failures += " " + p.filename().string() + "(" + e.what() + ")";
    }
  }
  // Content checks on the special cases.
  bool sym_ok = false, pattern_ok = false;
  try {
    // symmetric: off-diagonal entries appear in both directions, the diagonal once
    const CsrGraph s = load_graph(dir / "symmetric.mtx", GraphFormat::kMatrixMarket);
    std::size_t lower = 0, diag = 0;
    std::set<std::pair<VertexId, VertexId>> arcs;
    for (const auto& e : s.edges()) {
      arcs.insert({e.src, e.dst});
      diag += e.src == e.dst;
      lower += e.src > e.dst;
    }
    bool mirrored = true;
    for (const auto& [a, b] : arcs) mirrored &= arcs.count({b, a}) == 1;
    sym_ok = mirrored && diag >= 1 && lower >= 1 && s.num_edges() == 2 * lower + diag;
    const CsrGraph pat = load_graph(dir / "pattern.mtx", GraphFormat::kMatrixMarket);
    pattern_ok = pat.num_edges() > 0;
    for (Weight w : pat.weights()) pattern_ok &= w == 1;
  } catch (const std::exception&) {
  }
  const bool ok = files >= 5 && ok_count == files && sym_ok && pattern_ok;
  std::string d = fmt("%zu/%zu fixtures round-trip through both formats; symmetric expansion %s; "
                      "pattern weights %s",
                      ok_count, files, sym_ok ? "ok" : "BAD", pattern_ok ? "ok" : "BAD");
  if (!failures.empty()) d += "; failed:" + failures;
  return {ok, d};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
  bool all = true;
  for (const auto& [n, fn] : criteria) {
    if (only && n != only) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    all &= o.pass;
    std::printf("criterion %d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
