#include "mlmq/bucket_queue.hpp"

#include <algorithm>

#include "mlmq/backoff.hpp"
#include "mlmq/error.hpp"

namespace mlmq {

BucketQueue::BucketQueue(TerminationCounters& counters, const L2Params& params,
                         const L2Options& opts, Distance initial_base)
    : L2Queue(counters),
      delta_(params.delta),
      bmax_(params.bmax),
      bnum_(params.bnum),
      initial_base_(initial_base) {
  if (delta_ == 0) throw Error(ErrorKind::kInvalidParameter, "bucket delta must be >= 1");
  if (bmax_ == 0 || bnum_ == 0 || bnum_ > bmax_)
    throw Error(ErrorKind::kInvalidParameter, "bucket queue needs 1 <= bnum <= bmax");
  buckets_.reserve(bmax_);
  for (std::uint32_t i = 0; i < bmax_; ++i)
    buckets_.push_back(std::make_unique<BlockFifo>(params.block_size, params.block_num,
                                                   opts.num_groups, opts.spin_budget));
}

std::uint32_t BucketQueue::bucket_of(Distance d, Distance base) const {
  if (d < base) return 0;
  const Distance i = (d - base) / delta_;
  return static_cast<std::uint32_t>(std::min<Distance>(i, bmax_ - 1));
}

std::uint64_t BucketQueue::enter_writer(std::uint64_t& atomic_ops) {
  Backoff backoff;
  for (;;) {
    const std::uint64_t s = state_.fetch_add(1, std::memory_order_acq_rel);
    ++atomic_ops;
    if (!(s & kClosing)) return epoch_of(s);
    state_.fetch_sub(1, std::memory_order_acq_rel);
    ++atomic_ops;
    while (state_.load(std::memory_order_acquire) & kClosing) backoff.pause();
  }
}

void BucketQueue::do_write(GroupId, std::span<const Element> batch, std::uint64_t& atomic_ops) {
  const std::uint64_t epoch = enter_writer(atomic_ops);
  const Distance base = base_of(epoch);
  thread_local std::vector<std::vector<Element>> parts;
  parts.resize(bmax_);
  for (auto& p : parts) p.clear();
  for (const Element& e : batch) parts[bucket_of(e.dist, base)].push_back(e);
  try {
    for (std::uint32_t i = 0; i < bmax_; ++i)
      if (!parts[i].empty()) fifo(epoch, i).write(parts[i], atomic_ops);
  } catch (...) {
    state_.fetch_sub(1, std::memory_order_acq_rel);
    throw;
  }
  state_.fetch_sub(1, std::memory_order_acq_rel);
  ++atomic_ops;
}

bool BucketQueue::any_nonempty() const {
  return std::any_of(buckets_.begin(), buckets_.end(), [](const auto& b) { return !b->empty(); });
}

void BucketQueue::try_advance(std::uint64_t epoch, std::uint64_t& atomic_ops) {
  std::uint64_t expected = epoch << 32;
  ++atomic_ops;
  if (!state_.compare_exchange_strong(expected, expected | kClosing, std::memory_order_acq_rel))
    return;
  // No writer can enter now; bucket 0 stays empty if it is empty.
  const bool advance = fifo(epoch, 0).empty() && any_nonempty();
  state_.store(advance ? (epoch + 1) << 32 : epoch << 32, std::memory_order_release);
  ++atomic_ops;
}

std::size_t BucketQueue::do_read(GroupId g, std::size_t, std::vector<Element>& out,
                                 std::uint64_t& atomic_ops) {
  const std::size_t before = out.size();
  std::size_t pulled = 0;
  thread_local std::vector<Element> got;
  thread_local std::vector<Element> later;
  // Each retry follows an advance or a requeue, so the window keeps moving
  // toward the remaining elements; the cap only guards against livelock.
  constexpr std::uint32_t kMaxAttempts = 4096;
  for (std::uint32_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t epoch = epoch_of(state_.load(std::memory_order_acquire));
    bool first_empty = false;
    bool requeued = false;
    for (std::uint32_t i = 0; i < bnum_; ++i) {
      BlockFifo& f = fifo(epoch, i);
      got.clear();
      if (f.read(g, got, atomic_ops) == ReadStatus::kReadEmpty) {
        if (i == 0) first_empty = f.empty();
        continue;
      }
      pulled += got.size();
      // Classify against the newest base: the window may have moved since
      // this scan started.
      const Distance base = this->base();
      later.clear();
      for (const Element& e : got) {
        if (bucket_of(e.dist, base) < bnum_)
          out.push_back(e);
        else
          later.push_back(e);
      }
      if (!later.empty()) {
        requeue(g, later, atomic_ops);
        requeued = true;
      }
      break;
    }
    if (first_empty && any_nonempty()) try_advance(epoch, atomic_ops);
    if (out.size() > before) break;
    if (!first_empty && !requeued) break;
    if (!any_nonempty()) break;
  }
  return pulled;
}

std::vector<Element> BucketQueue::bucket_contents(std::uint32_t i) const {
  return fifo(epoch_of(state_.load()), i).snapshot();
}

std::vector<Element> BucketQueue::snapshot() const {
  std::vector<Element> out;
  for (std::uint32_t i = 0; i < bmax_; ++i) {
    auto part = bucket_contents(i);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

bool BucketQueue::empty() const { return !any_nonempty(); }

bool BucketQueue::discipline_holds() const {
  const Distance base = this->base();
  for (std::uint32_t i = 0; i < bmax_; ++i)
    for (const Element& e : bucket_contents(i))
      if (i > bucket_of(e.dist, base)) return false;
  return true;
}

}  // namespace mlmq
