#include "mlmq/adaptive.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

#include "mlmq/error.hpp"

namespace mlmq {

// --- grid -------------------------------------------------------------------

ParameterGrid default_grid() {
  ParameterGrid g;
  GridBlock main;
  main.l1_types = {L1Type::kVector, L1Type::kNearFar, L1Type::kFilter, L1Type::kSlf};
  main.l2_types = {L2Type::kFifo, L2Type::kBucket};
  main.delta_factor = {1.0, 4.0};
  g.blocks.push_back(main);
  GridBlock heaps;
  heaps.l1_types = {L1Type::kVector, L1Type::kSlf};
  heaps.l2_types = {L2Type::kPriority, L2Type::kMulti};
  g.blocks.push_back(heaps);
  return g;
}

namespace {

template <typename T>
std::vector<T> list_or(const nlohmann::json& j, const char* key, std::vector<T> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array()) return {v.get<T>()};
  return v.get<std::vector<T>>();
}

}  // namespace

ParameterGrid grid_from_json(const nlohmann::json& j) {
  ParameterGrid g;
  const nlohmann::json blocks = j.is_array() ? j : j.value("blocks", nlohmann::json::array());
  static const std::set<std::string> known = {"l1", "l2", "wb", "delta_nf_factor", "filter_factor",
                                              "delta_factor", "bmax", "bnum", "node_batch"};
  for (const auto& b : blocks) {
    if (!b.is_object()) throw Error(ErrorKind::kInvalidParameter, "grid block must be an object");
    for (const auto& [k, v] : b.items())
      if (!known.count(k)) throw Error(ErrorKind::kInvalidParameter, "unknown grid key: " + k);
    GridBlock blk;
    for (const auto& s : list_or<std::string>(b, "l1", {})) blk.l1_types.push_back(parse_l1_type(s));
    for (const auto& s : list_or<std::string>(b, "l2", {})) blk.l2_types.push_back(parse_l2_type(s));
    blk.wb = list_or(b, "wb", blk.wb);
    blk.delta_nf_factor = list_or(b, "delta_nf_factor", blk.delta_nf_factor);
    blk.filter_factor = list_or(b, "filter_factor", blk.filter_factor);
    blk.delta_factor = list_or(b, "delta_factor", blk.delta_factor);
    blk.bmax = list_or(b, "bmax", blk.bmax);
    blk.bnum = list_or(b, "bnum", blk.bnum);
    blk.node_batch = list_or(b, "node_batch", blk.node_batch);
    g.blocks.push_back(std::move(blk));
  }
  return g;
}

// --- encoding ---------------------------------------------------------------

namespace {
constexpr double kWbScale = 16, kNfScale = 4, kFilterScale = 8, kDeltaScale = 8, kBmaxScale = 32,
                 kBnumScale = 16, kBatchScale = 64;
}

const std::vector<std::string>& encoding_names() {
  static const std::vector<std::string> names = {
      "l1_vector", "l1_near_far", "l1_filter", "l1_slf", "l2_fifo", "l2_bucket", "l2_priority",
      "l2_multi",  "wb",          "delta_nf_factor",     "filter_factor",        "delta_factor",
      "bmax",      "bnum",        "node_batch"};
  return names;
}

std::vector<double> encode_config(const MlmqConfig& c) {
  std::vector<double> e(kEncodingSize, 0.0);
  e[static_cast<int>(c.l1_type)] = 1.0;
  e[4 + static_cast<int>(c.l2_type)] = 1.0;
  if (c.l1_type == L1Type::kVector) e[8] = c.l1.wb / kWbScale;
  if (c.l1_type == L1Type::kNearFar) e[9] = c.l1.delta_nf_factor / kNfScale;
  if (c.l1_type == L1Type::kFilter) e[10] = c.l1.filter_factor / kFilterScale;
  if (c.l2_type == L2Type::kBucket) {
    e[11] = c.l2.delta_factor / kDeltaScale;
    e[12] = c.l2.bmax / kBmaxScale;
    e[13] = c.l2.bnum / kBnumScale;
  }
  if (c.l2_type == L2Type::kPriority || c.l2_type == L2Type::kMulti)
    e[14] = c.l2.node_batch / kBatchScale;
  return e;
}

MlmqConfig decode_config(const std::vector<double>& e, const MlmqConfig& base) {
  if (e.size() != kEncodingSize)
    throw Error(ErrorKind::kParse, "config encoding must have " + std::to_string(kEncodingSize) +
                                       " fields");
  auto argmax = [&](int from) {
    return static_cast<int>(std::max_element(e.begin() + from, e.begin() + from + 4) - e.begin()) -
           from;
  };
  MlmqConfig c = base;
  c.l1 = L1Params{};
  c.l2 = L2Params{};
  c.l1.capacity = base.l1.capacity;
  c.l2.block_size = base.l2.block_size;
  c.l2.block_num = base.l2.block_num;
  c.l1_type = static_cast<L1Type>(argmax(0));
  c.l2_type = static_cast<L2Type>(argmax(4));
  auto u32 = [](double v) { return static_cast<std::uint32_t>(std::lround(v)); };
  if (c.l1_type == L1Type::kVector) c.l1.wb = u32(e[8] * kWbScale);
  if (c.l1_type == L1Type::kNearFar) c.l1.delta_nf_factor = e[9] * kNfScale;
  if (c.l1_type == L1Type::kFilter) c.l1.filter_factor = e[10] * kFilterScale;
  if (c.l2_type == L2Type::kBucket) {
    c.l2.delta_factor = e[11] * kDeltaScale;
    c.l2.bmax = u32(e[12] * kBmaxScale);
    c.l2.bnum = u32(e[13] * kBnumScale);
  }
  if (c.l2_type == L2Type::kPriority || c.l2_type == L2Type::kMulti)
    c.l2.node_batch = u32(e[14] * kBatchScale);
  return c;
}

std::vector<ConfigCandidate> enumerate_candidates(const ParameterGrid& grid,
                                                  const MlmqConfig& base) {
  std::vector<ConfigCandidate> out;
  std::set<std::string> seen;
  auto emit = [&](const MlmqConfig& c) {
    try {
      c.validate();
    } catch (const Error&) {
      return;
    }
    if (!seen.insert(c.label()).second) return;
    out.push_back(ConfigCandidate{c, encode_config(c)});
  };
  for (const GridBlock& b : grid.blocks) {
    for (L1Type l1 : b.l1_types) {
      std::vector<MlmqConfig> firsts;
      auto with = [&](auto apply, const auto& values) {
        for (const auto& v : values) {
          MlmqConfig c = base;
          c.l1_type = l1;
          apply(c, v);
          firsts.push_back(c);
        }
      };
      switch (l1) {
        case L1Type::kVector: with([](MlmqConfig& c, std::uint32_t v) { c.l1.wb = v; }, b.wb); break;
        case L1Type::kNearFar:
          with([](MlmqConfig& c, double v) { c.l1.delta_nf_factor = v; }, b.delta_nf_factor);
          break;
        case L1Type::kFilter:
          with([](MlmqConfig& c, double v) { c.l1.filter_factor = v; }, b.filter_factor);
          break;
        case L1Type::kSlf: with([](MlmqConfig&, int) {}, std::vector<int>{0}); break;
      }
      for (const MlmqConfig& f : firsts) {
        for (L2Type l2 : b.l2_types) {
          MlmqConfig c = f;
          c.l2_type = l2;
          if (l2 == L2Type::kFifo) {
            emit(c);
          } else if (l2 == L2Type::kBucket) {
            for (double d : b.delta_factor)
              for (std::uint32_t bm : b.bmax)
                for (std::uint32_t bn : b.bnum) {
                  c.l2.delta = 0;
                  c.l2.delta_factor = d;
                  c.l2.bmax = bm;
                  c.l2.bnum = bn;
                  emit(c);
                }
          } else {
            for (std::uint32_t nb : b.node_batch) {
              c.l2.node_batch = nb;
              emit(c);
            }
          }
        }
      }
    }
  }
  if (out.empty()) throw Error(ErrorKind::kInvalidParameter, "candidate grid is empty");
  return out;
}

// --- rules ------------------------------------------------------------------

MlmqConfig select_rule_based(const GraphFeatures& f, const MlmqConfig& base,
                             const RuleThresholds& t) {
  MlmqConfig c;
  c.num_groups = base.num_groups;
  c.lanes_per_group = base.lanes_per_group;
  c.th_v = base.th_v;
  c.l0_capacity = base.l0_capacity;
  if (f.dev_nnz > f.avg_nnz) {
    // Skewed degrees: stale high-degree expansions are expensive, so keep
    // priority order at both shared levels.
    c.l1_type = L1Type::kSlf;
    c.l2_type = L2Type::kBucket;
  } else if (f.m < t.small_vertices) {
    c.l1_type = L1Type::kVector;
    c.l2_type = L2Type::kFifo;
  } else if (f.avg_nnz >= t.mesh_min_avg_degree && f.avg_nnz <= t.mesh_max_avg_degree) {
    c.l1_type = L1Type::kFilter;
    c.l2_type = L2Type::kFifo;
  } else {
    c.l1_type = L1Type::kVector;
    c.l2_type = L2Type::kBucket;
  }
  return c;
}

// --- records ----------------------------------------------------------------

void assign_relative_performance(std::vector<BenchmarkRecord>& records) {
  std::map<std::string, double> best;
  for (const auto& r : records) {
    if (r.wall_time_us <= 0)
      throw Error(ErrorKind::kInvalidParameter, "record wall time must be positive");
    auto [it, fresh] = best.emplace(r.graph_id, r.wall_time_us);
    if (!fresh) it->second = std::min(it->second, r.wall_time_us);
  }
  for (auto& r : records) r.relative_performance = best.at(r.graph_id) / r.wall_time_us;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_records_csv(const std::vector<BenchmarkRecord>& records, std::ostream& out) {
  out << "graph_id";
  for (const char* n : GraphFeatures::names()) out << ',' << n;
  out << ",config";
  for (const auto& n : encoding_names()) out << ",enc_" << n;
  out << ",wall_time_us,relative_performance,relaxations,distance_updates,l2_atomic_ops\n";
  for (const auto& r : records) {
    std::string id = r.graph_id;
    std::replace(id.begin(), id.end(), ',', ';');
    out << id;
    for (double v : r.features.as_array()) out << ',' << fmt(v);
    std::string label = r.candidate.config.label();
    std::replace(label.begin(), label.end(), ',', ';');
    out << ',' << label;
    for (double v : r.candidate.encoding) out << ',' << fmt(v);
    out << ',' << fmt(r.wall_time_us) << ',' << fmt(r.relative_performance) << ','
        << r.relaxations << ',' << r.distance_updates << ',' << r.l2_atomic_ops << '\n';
  }
}

std::vector<BenchmarkRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::kParse, "records CSV is empty");
  const std::size_t expected = 1 + GraphFeatures::kCount + 1 + kEncodingSize + 5;
  if (split_csv(line).size() != expected)
    throw Error(ErrorKind::kParse, "records CSV header has the wrong number of columns");
  std::vector<BenchmarkRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != expected)
      throw Error(ErrorKind::kParse, "records CSV line " + std::to_string(lineno) + ": expected " +
                                         std::to_string(expected) + " fields");
    try {
      BenchmarkRecord r;
      std::size_t k = 0;
      r.graph_id = f[k++];
      std::array<double, GraphFeatures::kCount> feats{};
      for (auto& v : feats) v = std::stod(f[k++]);
      r.features = GraphFeatures::from_array(feats);
      ++k;  // label; the encoding is authoritative
      r.candidate.encoding.resize(kEncodingSize);
      for (auto& v : r.candidate.encoding) v = std::stod(f[k++]);
      r.candidate.config = decode_config(r.candidate.encoding);
      r.wall_time_us = std::stod(f[k++]);
      r.relative_performance = std::stod(f[k++]);
      r.relaxations = std::stoull(f[k++]);
      r.distance_updates = std::stoull(f[k++]);
      r.l2_atomic_ops = std::stoull(f[k++]);
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kParse, "records CSV line " + std::to_string(lineno) +
                                         ": malformed number");
    }
  }
  return out;
}

std::vector<BenchmarkRecord> collect_records(const std::vector<NamedGraph>& graphs,
                                             const std::vector<ConfigCandidate>& candidates,
                                             const EngineConfig& engine, std::uint32_t repeats) {
  if (candidates.empty()) throw Error(ErrorKind::kInvalidParameter, "candidate grid is empty");
  if (repeats == 0) repeats = 1;
  std::vector<BenchmarkRecord> out;
  for (const NamedGraph& ng : graphs) {
    const GraphFeatures feats = extract_features(ng.graph);
    for (const ConfigCandidate& c : candidates) {
      std::vector<std::pair<std::uint64_t, RunMetrics>> runs;
      for (std::uint32_t i = 0; i < repeats; ++i) {
        const SsspResult r = sssp_solve(ng.graph, ng.source, c.config, engine);
        runs.emplace_back(std::max<std::uint64_t>(1, r.metrics.wall_time_us), r.metrics);
      }
      std::sort(runs.begin(), runs.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      const auto& median = runs[runs.size() / 2];
      BenchmarkRecord rec;
      rec.graph_id = ng.id;
      rec.features = feats;
      rec.candidate = c;
      rec.wall_time_us = static_cast<double>(median.first);
      rec.relaxations = median.second.relaxations;
      rec.distance_updates = median.second.distance_updates;
      rec.l2_atomic_ops = median.second.l2_atomic_ops;
      out.push_back(std::move(rec));
    }
  }
  assign_relative_performance(out);
  return out;
}

// --- model ------------------------------------------------------------------

namespace {

std::vector<double> model_row(const GraphFeatures& f, const std::vector<double>& enc) {
  std::vector<double> row;
  row.reserve(GraphFeatures::kCount + enc.size());
  for (double v : f.as_array()) row.push_back(v);
  row.insert(row.end(), enc.begin(), enc.end());
  return row;
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t corpus_hash(const std::vector<BenchmarkRecord>& records) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& r : records) {
    h = fnv1a(h, r.graph_id.data(), r.graph_id.size());
    for (double v : model_row(r.features, r.candidate.encoding)) h = fnv1a(h, &v, sizeof v);
    h = fnv1a(h, &r.relative_performance, sizeof(double));
  }
  return h;
}

}  // namespace

double SelectorModel::predict(const GraphFeatures& f, const ConfigCandidate& c) const {
  return std::clamp(forest.predict(model_row(f, c.encoding)), 0.0, 1.0);
}

SelectorModel train_selector(const std::vector<BenchmarkRecord>& records,
                             const ForestParams& params) {
  std::set<std::string> graphs;
  std::set<std::vector<double>> configs;
  for (const auto& r : records) {
    graphs.insert(r.graph_id);
    configs.insert(r.candidate.encoding);
  }
  if (graphs.size() < 2 || configs.size() < 2)
    throw Error(ErrorKind::kInsufficientData,
                "training needs at least 2 graphs and 2 configs (got " +
                    std::to_string(graphs.size()) + " graphs, " + std::to_string(configs.size()) +
                    " configs)");
  const std::size_t dim = GraphFeatures::kCount + kEncodingSize;
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(records.size() * dim);
  for (const auto& r : records) {
    const auto row = model_row(r.features, r.candidate.encoding);
    x.insert(x.end(), row.begin(), row.end());
    y.push_back(r.relative_performance);
  }
  SelectorModel m;
  m.forest.fit(x, dim, y, params);
  m.corpus_hash = corpus_hash(records);
  m.tree_count = params.trees;
  m.max_depth = params.max_depth;
  m.seed = params.seed;
  return m;
}

// File layout, all little-endian:
//   char[8] "MLMQSEL\0", u32 version, u32 input_dim, u64 corpus_hash,
//   u32 tree_count, u32 max_depth, u64 seed,
//   then per tree: u32 node_count, and per node
//   i32 feature, f64 threshold, i32 left, i32 right, f64 value.
namespace {

constexpr char kMagic[8] = {'M', 'L', 'M', 'Q', 'S', 'E', 'L', '\0'};
static_assert(std::endian::native == std::endian::little, "model format assumes little-endian");

template <typename T> void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T> T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw Error(ErrorKind::kParse, "model file is truncated");
  return v;
}

}  // namespace

void save_model(const SelectorModel& m, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kModelVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.forest.dim()));
  put<std::uint64_t>(out, m.corpus_hash);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.forest.trees().size()));
  put<std::uint32_t>(out, m.max_depth);
  put<std::uint64_t>(out, m.seed);
  for (const auto& t : m.forest.trees()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.size()));
    for (const auto& n : t) {
      put<std::int32_t>(out, n.feature);
      put<double>(out, n.threshold);
      put<std::int32_t>(out, n.left);
      put<std::int32_t>(out, n.right);
      put<double>(out, n.value);
    }
  }
  if (!out) throw Error(ErrorKind::kIo, "failed to write model");
}

SelectorModel load_model(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error(ErrorKind::kParse, "not a selector model file");
  const auto version = get<std::uint32_t>(in);
  if (version != kModelVersion)
    throw Error(ErrorKind::kParse, "unsupported model version " + std::to_string(version));
  SelectorModel m;
  const auto dim = get<std::uint32_t>(in);
  if (dim != GraphFeatures::kCount + kEncodingSize)
    throw Error(ErrorKind::kParse, "model input width does not match this build");
  m.corpus_hash = get<std::uint64_t>(in);
  m.tree_count = get<std::uint32_t>(in);
  m.max_depth = get<std::uint32_t>(in);
  m.seed = get<std::uint64_t>(in);
  std::vector<RegressionForest::Tree> trees(m.tree_count);
  for (auto& t : trees) {
    const auto n = get<std::uint32_t>(in);
    t.resize(n);
    for (auto& node : t) {
      node.feature = get<std::int32_t>(in);
      node.threshold = get<double>(in);
      node.left = get<std::int32_t>(in);
      node.right = get<std::int32_t>(in);
      node.value = get<double>(in);
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto& node = t[i];
      const bool leaf = node.feature < 0;
      if (!leaf && (node.feature >= std::int32_t(dim) || node.left <= std::int32_t(i) ||
                    node.right <= std::int32_t(i) || node.left >= std::int32_t(n) ||
                    node.right >= std::int32_t(n)))
        throw Error(ErrorKind::kParse, "model tree is malformed");
    }
    if (n == 0) throw Error(ErrorKind::kParse, "model tree is empty");
  }
  m.forest.set(dim, std::move(trees));
  return m;
}

void save_model(const SelectorModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  save_model(m, out);
}

SelectorModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return load_model(in);
}

// --- selection --------------------------------------------------------------

std::vector<MlmqConfig> select_config(const GraphFeatures& f, const SelectorModel* model,
                                      const std::vector<ConfigCandidate>& candidates,
                                      const RuleThresholds& t) {
  if (candidates.empty()) throw Error(ErrorKind::kPrecondition, "no candidates to select from");
  std::vector<MlmqConfig> out;
  if (model) {
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < candidates.size(); ++i)
      scored.emplace_back(model->predict(f, candidates[i]), i);
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [score, i] : scored) out.push_back(candidates[i].config);
    return out;
  }
  const MlmqConfig rule = select_rule_based(f, candidates.front().config, t);
  out.push_back(rule);
  const std::string rule_label = rule.label();
  for (const auto& c : candidates)
    if (c.config.label() != rule_label) out.push_back(c.config);
  return out;
}

}  // namespace mlmq
