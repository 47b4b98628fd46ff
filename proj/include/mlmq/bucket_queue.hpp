#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mlmq/block_fifo.hpp"
#include "mlmq/config.hpp"
#include "mlmq/l2_queue.hpp"

namespace mlmq {

// Delta-stepping style queue: bmax block FIFOs used as a circular window of
// width-delta distance intervals starting at `base`. Logical bucket i lives in
// FIFO (epoch + i) % bmax, so moving the window forward is just epoch + 1.
//
// The window only moves when bucket 0 is empty and something is queued
// elsewhere. Moving it closes the queue to writers for the duration of one
// emptiness check, so no element can land in the slot that is about to become
// the far end of the window.
class BucketQueue final : public L2Queue {
 public:
  BucketQueue(TerminationCounters& counters, const L2Params& params, const L2Options& opts,
              Distance initial_base = 0);

  L2Type type() const override { return L2Type::kBucket; }
  std::vector<Element> snapshot() const override;
  bool empty() const override;
  // Every stored element sits at a logical bucket no later than the one its
  // distance maps to under the current base.
  bool discipline_holds() const override;

  Distance base() const { return base_of(epoch_of(state_.load())); }
  Distance delta() const { return delta_; }
  std::uint32_t bmax() const { return bmax_; }
  std::uint32_t bnum() const { return bnum_; }
  std::uint32_t bucket_of(Distance d) const { return bucket_of(d, base()); }
  // Quiescent only: contents of logical bucket i.
  std::vector<Element> bucket_contents(std::uint32_t i) const;

 protected:
  void do_write(GroupId g, std::span<const Element> batch, std::uint64_t& atomic_ops) override;
  std::size_t do_read(GroupId g, std::size_t want, std::vector<Element>& out,
                      std::uint64_t& atomic_ops) override;

 private:
  // state_ = epoch << 32 | closing << 31 | in-flight writers
  static constexpr std::uint64_t kClosing = std::uint64_t{1} << 31;
  static constexpr std::uint64_t kWriterMask = kClosing - 1;
  static std::uint64_t epoch_of(std::uint64_t s) { return s >> 32; }

  Distance base_of(std::uint64_t epoch) const { return initial_base_ + epoch * delta_; }
  std::uint32_t bucket_of(Distance d, Distance base) const;
  BlockFifo& fifo(std::uint64_t epoch, std::uint32_t i) const {
    return *buckets_[(epoch + i) % bmax_];
  }
  std::uint64_t enter_writer(std::uint64_t& atomic_ops);
  bool any_nonempty() const;
  void try_advance(std::uint64_t epoch, std::uint64_t& atomic_ops);

  Distance delta_;
  std::uint32_t bmax_;
  std::uint32_t bnum_;
  Distance initial_base_;
  std::vector<std::unique_ptr<BlockFifo>> buckets_;
  alignas(64) std::atomic<std::uint64_t> state_{0};
};

}  // namespace mlmq
