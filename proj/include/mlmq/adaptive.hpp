#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlmq/config.hpp"
#include "mlmq/engine.hpp"
#include "mlmq/features.hpp"
#include "mlmq/forest.hpp"
#include "mlmq/graph.hpp"

namespace mlmq {

// One cartesian block of candidate configurations. A parameter list only
// multiplies the combinations of the queue types that use it.
struct GridBlock {
  std::vector<L1Type> l1_types;
  std::vector<std::uint32_t> wb{8};                 // vector
  std::vector<double> delta_nf_factor{0.0};         // near_far
  std::vector<double> filter_factor{4.0};           // filter
  std::vector<L2Type> l2_types;
  std::vector<double> delta_factor{1.0};            // bucket
  std::vector<std::uint32_t> bmax{16};              // bucket
  std::vector<std::uint32_t> bnum{1};               // bucket
  std::vector<std::uint32_t> node_batch{32};        // priority, multi
};

struct ParameterGrid {
  std::vector<GridBlock> blocks;
};

ParameterGrid default_grid();
ParameterGrid grid_from_json(const nlohmann::json& j);

struct ConfigCandidate {
  MlmqConfig config;
  std::vector<double> encoding;
};

inline constexpr std::size_t kEncodingSize = 15;
const std::vector<std::string>& encoding_names();
std::vector<double> encode_config(const MlmqConfig& cfg);
// Inverse of encode_config on the encoded fields; the rest come from `base`.
MlmqConfig decode_config(const std::vector<double>& encoding, const MlmqConfig& base = {});

// Every valid combination of every block, in block order. Fields not swept by
// the grid are taken from `base`. Throws on an empty grid or empty result.
std::vector<ConfigCandidate> enumerate_candidates(const ParameterGrid& grid,
                                                  const MlmqConfig& base = {});

struct RuleThresholds {
  // Below this many vertices a graph counts as small.
  double small_vertices = 5000;
  // Mesh-like: nearly uniform degree in this range.
  double mesh_min_avg_degree = 4.5;
  double mesh_max_avg_degree = 10.0;
};

MlmqConfig select_rule_based(const GraphFeatures& f, const MlmqConfig& base = {},
                             const RuleThresholds& t = {});

struct BenchmarkRecord {
  std::string graph_id;
  GraphFeatures features;
  ConfigCandidate candidate;
  double wall_time_us = 0;
  double relative_performance = 0;
  // Work counters of the median-time run.
  std::uint64_t relaxations = 0;
  std::uint64_t distance_updates = 0;
  std::uint64_t l2_atomic_ops = 0;
};

// Sets relative_performance = best wall time on the graph / wall time.
void assign_relative_performance(std::vector<BenchmarkRecord>& records);

void write_records_csv(const std::vector<BenchmarkRecord>& records, std::ostream& out);
std::vector<BenchmarkRecord> read_records_csv(std::istream& in);

struct NamedGraph {
  std::string id;
  CsrGraph graph;
  VertexId source = 0;
};

// Runs every candidate on every graph `repeats` times and keeps the median
// wall time. Runs are strictly sequential.
std::vector<BenchmarkRecord> collect_records(const std::vector<NamedGraph>& graphs,
                                             const std::vector<ConfigCandidate>& candidates,
                                             const EngineConfig& engine = {},
                                             std::uint32_t repeats = 3);

struct SelectorModel {
  RegressionForest forest;
  std::uint64_t corpus_hash = 0;
  std::uint32_t tree_count = 0;
  std::uint32_t max_depth = 0;
  std::uint64_t seed = 0;

  // Clamped to [0, 1].
  double predict(const GraphFeatures& f, const ConfigCandidate& c) const;
};

inline constexpr std::uint32_t kModelVersion = 1;

SelectorModel train_selector(const std::vector<BenchmarkRecord>& records,
                             const ForestParams& params = {});
void save_model(const SelectorModel& m, std::ostream& out);
SelectorModel load_model(std::istream& in);
void save_model(const SelectorModel& m, const std::filesystem::path& path);
SelectorModel load_model(const std::filesystem::path& path);

// Ranked best first. With a model: descending prediction, ties keep
// candidate order. Without: the rule-based choice, then the candidates in
// order (the rule-based choice is not repeated).
std::vector<MlmqConfig> select_config(const GraphFeatures& f, const SelectorModel* model,
                                      const std::vector<ConfigCandidate>& candidates,
                                      const RuleThresholds& t = {});

}  // namespace mlmq
