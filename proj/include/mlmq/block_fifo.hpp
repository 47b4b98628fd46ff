#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mlmq/element.hpp"
#include "mlmq/l2_queue.hpp"
#include "mlmq/termination.hpp"

namespace mlmq {

// Block-based concurrent FIFO over a ring of `block_num` slots.
//
// A writer takes one ticket per block from write_ptr, waits until the slot
// for that ticket is free, copies, then publishes the block. A reader takes a
// ticket from read_ptr only while read_ptr is behind write_ptr, so it never
// claims a block nobody is writing; if the claimed block is still being
// copied it reports empty and keeps the ticket for its next call.
//
// Each slot carries a sequence word: ticket t may write when seq == t, the
// block is readable when seq == t + 1, and reading releases the slot for
// ticket t + block_num. The per-slot count is the block's valid size.
class BlockFifo {
 public:
  BlockFifo(std::uint32_t block_size, std::uint32_t block_num, std::size_t num_groups,
            std::chrono::milliseconds spin_budget = std::chrono::milliseconds(5000));

  void write(std::span<const Element> batch, std::uint64_t& atomic_ops);
  ReadStatus read(GroupId g, std::vector<Element>& out, std::uint64_t& atomic_ops);

  // True when every write ticket handed out so far has been consumed.
  bool empty() const;

  std::uint32_t block_size() const { return block_size_; }
  std::uint32_t block_num() const { return block_num_; }
  std::uint64_t write_tickets() const { return write_ptr_.load(std::memory_order_acquire); }
  std::uint64_t read_tickets() const { return read_ptr_.load(std::memory_order_acquire); }
  std::uint64_t consumed_blocks() const { return consumed_.load(std::memory_order_acquire); }

  // Quiescent only: unread elements, and the valid counts of unread blocks,
  // both in ticket order.
  std::vector<Element> snapshot() const;
  std::vector<std::uint32_t> pending_block_sizes() const;

 private:
  struct Slot {
    std::atomic<std::uint64_t> seq{0};
    std::uint32_t count = 0;
  };
  struct alignas(64) PendingTicket {
    std::int64_t ticket = -1;
  };

  Element* block(std::uint64_t ticket) const {
    return data_.get() + (ticket % block_num_) * block_size_;
  }
  void write_block(std::span<const Element> seg, std::uint64_t& atomic_ops);

  std::uint32_t block_size_;
  std::uint32_t block_num_;
  std::chrono::milliseconds spin_budget_;
  std::unique_ptr<Slot[]> slots_;
  std::unique_ptr<Element[]> data_;
  std::vector<PendingTicket> pending_;
  alignas(64) std::atomic<std::uint64_t> write_ptr_{0};
  alignas(64) std::atomic<std::uint64_t> read_ptr_{0};
  alignas(64) std::atomic<std::uint64_t> consumed_{0};
};

class FifoQueue final : public L2Queue {
 public:
  FifoQueue(TerminationCounters& counters, std::uint32_t block_size, std::uint32_t block_num,
            const L2Options& opts)
      : L2Queue(counters),
        fifo_(block_size, block_num, opts.num_groups, opts.spin_budget) {}

  L2Type type() const override { return L2Type::kFifo; }
  std::vector<Element> snapshot() const override { return fifo_.snapshot(); }
  bool empty() const override { return fifo_.empty(); }
  const BlockFifo& fifo() const { return fifo_; }

 protected:
  void do_write(GroupId, std::span<const Element> batch, std::uint64_t& atomic_ops) override {
    fifo_.write(batch, atomic_ops);
  }
  std::size_t do_read(GroupId g, std::size_t, std::vector<Element>& out,
                      std::uint64_t& atomic_ops) override {
    const std::size_t before = out.size();
    fifo_.read(g, out, atomic_ops);
    return out.size() - before;
  }

 private:
  BlockFifo fifo_;
};

}  // namespace mlmq
