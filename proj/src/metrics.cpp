#include "mlmq/metrics.hpp"

namespace mlmq {

RunMetrics& RunMetrics::operator+=(const RunMetrics& o) {
  relaxations += o.relaxations;
  distance_updates += o.distance_updates;
  for (int l = 0; l < 3; ++l) {
    enqueues[l] += o.enqueues[l];
    dequeues[l] += o.dequeues[l];
  }
  l2_atomic_ops += o.l2_atomic_ops;
  flushes += o.flushes;
  settled_reads += o.settled_reads;
  // Wall time is a property of the whole run, not of a shard.
  return *this;
}

nlohmann::json to_json(const RunMetrics& m) {
  return nlohmann::json{
      {"relaxations", m.relaxations},
      {"distance_updates", m.distance_updates},
      {"l0_enqueues", m.enqueues[kL0]},
      {"l0_dequeues", m.dequeues[kL0]},
      {"l1_enqueues", m.enqueues[kL1]},
      {"l1_dequeues", m.dequeues[kL1]},
      {"l2_enqueues", m.enqueues[kL2]},
      {"l2_dequeues", m.dequeues[kL2]},
      {"l2_atomic_ops", m.l2_atomic_ops},
      {"flushes", m.flushes},
      {"settled_reads", m.settled_reads},
      {"wall_time_us", m.wall_time_us},
  };
}

RunMetrics metrics_from_json(const nlohmann::json& j) {
  RunMetrics m;
  m.relaxations = j.at("relaxations").get<std::uint64_t>();
  m.distance_updates = j.at("distance_updates").get<std::uint64_t>();
  m.enqueues[kL0] = j.at("l0_enqueues").get<std::uint64_t>();
  m.dequeues[kL0] = j.at("l0_dequeues").get<std::uint64_t>();
  m.enqueues[kL1] = j.at("l1_enqueues").get<std::uint64_t>();
  m.dequeues[kL1] = j.at("l1_dequeues").get<std::uint64_t>();
  m.enqueues[kL2] = j.at("l2_enqueues").get<std::uint64_t>();
  m.dequeues[kL2] = j.at("l2_dequeues").get<std::uint64_t>();
  m.l2_atomic_ops = j.at("l2_atomic_ops").get<std::uint64_t>();
  m.flushes = j.at("flushes").get<std::uint64_t>();
  m.settled_reads = j.at("settled_reads").get<std::uint64_t>();
  m.wall_time_us = j.at("wall_time_us").get<std::uint64_t>();
  return m;
}

}  // namespace mlmq
