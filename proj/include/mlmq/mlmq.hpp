#pragma once

#include <span>
#include <vector>

#include "mlmq/config.hpp"
#include "mlmq/element.hpp"
#include "mlmq/l0_queue.hpp"
#include "mlmq/l1_queues.hpp"
#include "mlmq/l2_queue.hpp"
#include "mlmq/metrics.hpp"

namespace mlmq {

// One worker group's view of the queue hierarchy: its own L0 and L1 plus the
// shared L2. Reads try the levels in order and stop at the first non-empty
// one; writes enter at L0 and spill downwards.
class MlmqHandle {
 public:
  // `cfg` must be resolved.
  MlmqHandle(GroupId group, const MlmqConfig& cfg, L2Queue& l2);

  ReadStatus read(std::size_t want, std::vector<Element>& out);
  // Always reports success; spills to lower levels are internal.
  WriteStatus write(std::span<const Element> batch);
  // Puts (source, 0) straight into L2.
  void bootstrap(VertexId source);

  GroupId group() const { return group_; }
  const L0Queue& l0() const { return l0_; }
  const L1Queue& l1() const { return l1_; }
  L2Queue& l2() const { return l2_; }
  RunMetrics& metrics() { return metrics_; }
  const RunMetrics& metrics() const { return metrics_; }
  bool locally_empty() const { return l0_.empty() && l1_size(l1_) == 0; }

 private:
  GroupId group_;
  L0Queue l0_;
  L1Queue l1_;
  L2Queue& l2_;
  RunMetrics metrics_;
  std::vector<Element> to_l1_;
  std::vector<Element> to_l2_;
};

inline ReadStatus mlmq_read(MlmqHandle& h, std::size_t want, std::vector<Element>& out) {
  return h.read(want, out);
}
inline WriteStatus mlmq_write(MlmqHandle& h, std::span<const Element> batch) {
  return h.write(batch);
}
inline void mlmq_bootstrap(MlmqHandle& h, VertexId source) { h.bootstrap(source); }

}  // namespace mlmq
