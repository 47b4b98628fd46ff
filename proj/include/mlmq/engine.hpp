#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mlmq/config.hpp"
#include "mlmq/distance_table.hpp"
#include "mlmq/graph.hpp"
#include "mlmq/metrics.hpp"
#include "mlmq/mlmq.hpp"

namespace mlmq {

// Post-run check that the hierarchy really drained.
struct RunAudit {
  bool l2_empty = false;
  bool local_queues_empty = false;
  bool local_done_flushed = false;
  std::uint64_t global_reserve = 0;
  std::uint64_t global_done = 0;

  bool ok() const {
    return l2_empty && local_queues_empty && local_done_flushed && global_reserve == global_done;
  }
};

struct SsspResult {
  std::vector<Distance> distances;
  RunMetrics metrics;
  MlmqConfig config_used;  // resolved
  RunAudit audit;
  // Only counted with EngineConfig::check_monotonic.
  std::uint64_t monotonicity_violations = 0;
};

// `cfg` may be unresolved; it is resolved against the graph before the run.
SsspResult sssp_solve(const CsrGraph& g, VertexId source, const MlmqConfig& cfg,
                      const EngineConfig& engine = {});
// Same engine with every edge weight taken as 1.
SsspResult bfs_solve(const CsrGraph& g, VertexId source, const MlmqConfig& cfg,
                     const EngineConfig& engine = {});

struct RelaxStats {
  std::uint64_t dropped = 0;
  std::uint64_t cooperative_vertices = 0;
  std::uint64_t distributed_vertices = 0;
};

// One group's relaxation step over a batch it has read. Stale elements are
// dropped when `duplicate_elimination` is set. Vertices with more than th_v
// out-edges are expanded one at a time by all lanes together; the remaining
// vertices' edges are pooled and dealt out to the lanes. Each lane step
// writes its improved elements back through `h`.
RelaxStats relax_batch(const CsrGraph& g, DistanceTable& dist, MlmqHandle& h,
                       std::span<const Element> batch, std::uint32_t lanes, std::uint32_t th_v,
                       bool duplicate_elimination);

}  // namespace mlmq
