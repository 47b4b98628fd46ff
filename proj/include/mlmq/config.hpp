#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mlmq/element.hpp"

namespace mlmq {

enum class L1Type { kVector, kNearFar, kFilter, kSlf };
enum class L2Type { kFifo, kBucket, kPriority, kMulti };

std::string_view to_string(L1Type t);
std::string_view to_string(L2Type t);
L1Type parse_l1_type(std::string_view s);
L2Type parse_l2_type(std::string_view s);

// Distance-valued parameters accept either an absolute value or, when the
// absolute value is 0, a factor of the graph's average edge weight. The
// factors are what the adaptive selector varies.
struct L1Params {
  std::uint32_t capacity = 1024;
  std::uint32_t wb = 8;  // periodic flush period; 0 disables flushing
  Distance delta_nf = 0;
  double delta_nf_factor = 0.0;  // 0: follow the L2 bucket width, else avg weight
  Distance filter_window = 0;
  double filter_factor = 4.0;
};

struct L2Params {
  std::uint32_t block_size = 64;
  std::uint32_t block_num = 4096;
  Distance delta = 0;
  double delta_factor = 1.0;
  std::uint32_t bmax = 16;
  std::uint32_t bnum = 1;
  std::uint32_t node_batch = 32;
  std::uint32_t node_capacity = 0;  // 0: sized from the graph
  std::uint32_t pnum = 0;           // 0: max(1, num_groups / 4)
};

struct MlmqConfig {
  std::uint32_t l0_capacity = 4;
  L1Type l1_type = L1Type::kVector;
  L1Params l1;
  L2Type l2_type = L2Type::kFifo;
  L2Params l2;
  std::uint32_t num_groups = 4;
  std::uint32_t lanes_per_group = 32;
  std::uint32_t th_v = 16;

  // Throws Error(kInvalidParameter) describing the first violated constraint.
  void validate() const;

  // Short label such as "L1SLF-L2DQ(d=1,bmax=16,bnum=1)".
  std::string label() const;
};

// Replaces every factor-based parameter with an absolute value for a graph
// whose mean edge weight is `avg_weight`, and fills in graph-sized defaults.
MlmqConfig resolve(const MlmqConfig& cfg, double avg_weight,
                   std::size_t num_vertices);

struct EngineConfig {
  bool duplicate_elimination = true;
  std::uint64_t seed = 0;
  std::uint32_t confirm_polls = 3;
  std::chrono::microseconds poll_interval{20};
  std::chrono::milliseconds watchdog{60000};
  // Test hook: the manager samples distance entries and counts increases.
  bool check_monotonic = false;
};

nlohmann::json to_json(const MlmqConfig& cfg);
MlmqConfig config_from_json(const nlohmann::json& j);

}  // namespace mlmq
