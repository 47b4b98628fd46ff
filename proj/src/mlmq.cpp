#include "mlmq/mlmq.hpp"

namespace mlmq {

MlmqHandle::MlmqHandle(GroupId group, const MlmqConfig& cfg, L2Queue& l2)
    : group_(group),
      l0_(cfg.lanes_per_group, cfg.l0_capacity),
      l1_(make_l1_queue(cfg)),
      l2_(l2) {
  to_l1_.reserve(std::size_t(cfg.lanes_per_group) * cfg.l0_capacity + cfg.lanes_per_group);
  to_l2_.reserve(cfg.l1.capacity + to_l1_.capacity());
}

ReadStatus MlmqHandle::read(std::size_t want, std::vector<Element>& out) {
  if (want == 0) return ReadStatus::kSuccess;
  const std::size_t before = out.size();
  if (l0_.read(want, out) == ReadStatus::kSuccess) {
    metrics_.dequeues[kL0] += out.size() - before;
    return ReadStatus::kSuccess;
  }
  if (l1_read(l1_, want, out) == ReadStatus::kSuccess) {
    metrics_.dequeues[kL1] += out.size() - before;
    return ReadStatus::kSuccess;
  }
  const ReadStatus s = l2_.read(group_, want, out, metrics_.l2_atomic_ops);
  metrics_.dequeues[kL2] += out.size() - before;
  return s;
}

WriteStatus MlmqHandle::write(std::span<const Element> batch) {
  if (batch.empty()) return WriteStatus::kSuccess;
  metrics_.enqueues[kL0] += batch.size();
  to_l1_.clear();
  if (l0_.write(batch, to_l1_) == WriteStatus::kSuccess) return WriteStatus::kSuccess;
  metrics_.dequeues[kL0] += to_l1_.size();
  metrics_.enqueues[kL1] += to_l1_.size();
  to_l2_.clear();
  const std::uint64_t flushes_before = l1_flushes(l1_);
  const WriteStatus s = l1_write(l1_, to_l1_, to_l2_);
  metrics_.flushes += l1_flushes(l1_) - flushes_before;
  if (s == WriteStatus::kSuccess) return WriteStatus::kSuccess;
  metrics_.dequeues[kL1] += to_l2_.size();
  metrics_.enqueues[kL2] += to_l2_.size();
  l2_.write(group_, to_l2_, metrics_.l2_atomic_ops);
  return WriteStatus::kSuccess;
}

void MlmqHandle::bootstrap(VertexId source) {
  l2_.bootstrap(group_, source, metrics_.l2_atomic_ops);
  metrics_.enqueues[kL2] += 1;
}

}  // namespace mlmq
