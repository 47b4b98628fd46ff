#include "mlmq/l2_queue.hpp"

#include "mlmq/batch_heap.hpp"
#include "mlmq/block_fifo.hpp"
#include "mlmq/bucket_queue.hpp"
#include "mlmq/error.hpp"

namespace mlmq {

void L2Queue::write(GroupId g, std::span<const Element> batch, std::uint64_t& atomic_ops) {
  if (batch.empty()) return;
  counters_.add_reserve(batch.size());
  ++atomic_ops;
  do_write(g, batch, atomic_ops);
}

ReadStatus L2Queue::read(GroupId g, std::size_t want, std::vector<Element>& out,
                         std::uint64_t& atomic_ops) {
  const std::size_t before = out.size();
  const std::size_t pulled = want == 0 ? 0 : do_read(g, want, out, atomic_ops);
  if (pulled > 0) counters_.note_read(g, pulled);
  if (out.size() > before) return ReadStatus::kSuccess;
  if (want == 0) return ReadStatus::kSuccess;
  if (counters_.flush(g)) ++atomic_ops;
  return ReadStatus::kReadEmpty;
}

void L2Queue::bootstrap(GroupId g, VertexId source, std::uint64_t& atomic_ops) {
  if (bootstrapped_.exchange(true))
    throw Error(ErrorKind::kPrecondition, "queue already bootstrapped");
  const Element e{source, 0};
  write(g, std::span<const Element>(&e, 1), atomic_ops);
}

std::unique_ptr<L2Queue> make_l2_queue(const MlmqConfig& cfg, TerminationCounters& counters,
                                       const L2Options& opts) {
  switch (cfg.l2_type) {
    case L2Type::kFifo:
      return std::make_unique<FifoQueue>(counters, cfg.l2.block_size, cfg.l2.block_num, opts);
    case L2Type::kBucket:
      return std::make_unique<BucketQueue>(counters, cfg.l2, opts);
    case L2Type::kPriority:
      return std::make_unique<PriorityQueue>(counters, cfg.l2.node_batch, cfg.l2.node_capacity);
    case L2Type::kMulti:
      return std::make_unique<MultiQueue>(counters, cfg.l2.pnum, cfg.l2.node_batch,
                                          cfg.l2.node_capacity, opts.num_groups);
  }
  throw Error(ErrorKind::kInvalidParameter, "unknown L2 type");
}

}  // namespace mlmq
