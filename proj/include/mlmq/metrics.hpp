#pragma once

#include <array>
#include <cstdint>

#include "json.hpp"

namespace mlmq {

enum Level : int { kL0 = 0, kL1 = 1, kL2 = 2 };

// Work and traffic counters for one run. Each worker group owns a shard; the
// engine sums the shards when the run ends.
//
// An enqueue is an element handed to a level's Write; a dequeue is an element
// leaving the level, either through Read or as a write-back to the next level.
struct RunMetrics {
  std::uint64_t relaxations = 0;
  std::uint64_t distance_updates = 0;
  std::array<std::uint64_t, 3> enqueues{};
  std::array<std::uint64_t, 3> dequeues{};
  std::uint64_t l2_atomic_ops = 0;
  std::uint64_t flushes = 0;
  std::uint64_t settled_reads = 0;
  std::uint64_t wall_time_us = 0;

  std::uint64_t total_dequeues() const {
    return dequeues[0] + dequeues[1] + dequeues[2];
  }

  RunMetrics& operator+=(const RunMetrics& o);
};

nlohmann::json to_json(const RunMetrics& m);
RunMetrics metrics_from_json(const nlohmann::json& j);

}  // namespace mlmq
