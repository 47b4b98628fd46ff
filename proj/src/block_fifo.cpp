#include "mlmq/block_fifo.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "mlmq/backoff.hpp"
#include "mlmq/error.hpp"

namespace mlmq {

BlockFifo::BlockFifo(std::uint32_t block_size, std::uint32_t block_num, std::size_t num_groups,
                     std::chrono::milliseconds spin_budget)
    : block_size_(block_size),
      block_num_(block_num),
      spin_budget_(spin_budget),
      slots_(new Slot[block_num]),
      // Left uninitialized on purpose: pages are only touched when written.
      data_(new Element[static_cast<std::size_t>(block_num) * block_size]),
      pending_(num_groups) {
  for (std::uint32_t i = 0; i < block_num; ++i) slots_[i].seq.store(i, std::memory_order_relaxed);
}

void BlockFifo::write_block(std::span<const Element> seg, std::uint64_t& atomic_ops) {
  const std::uint64_t ticket = write_ptr_.fetch_add(1, std::memory_order_acq_rel);
  ++atomic_ops;
  Slot& slot = slots_[ticket % block_num_];
  if (slot.seq.load(std::memory_order_acquire) != ticket) {
    const auto start = std::chrono::steady_clock::now();
    Backoff backoff;
    while (slot.seq.load(std::memory_order_acquire) != ticket) {
      if (std::chrono::steady_clock::now() - start > spin_budget_)
        throw Error(ErrorKind::kQueueOverflow,
                    "L2 ring full: write ticket " + std::to_string(ticket) + " waited " +
                        std::to_string(spin_budget_.count()) + " ms for slot " +
                        std::to_string(ticket % block_num_) + " (block_num=" +
                        std::to_string(block_num_) + ", consumed=" +
                        std::to_string(consumed_.load()) + "); increase block_num");
      backoff.pause();
    }
  }
  std::memcpy(block(ticket), seg.data(), seg.size() * sizeof(Element));
  slot.count = static_cast<std::uint32_t>(seg.size());
  slot.seq.store(ticket + 1, std::memory_order_release);
}

void BlockFifo::write(std::span<const Element> batch, std::uint64_t& atomic_ops) {
  for (std::size_t at = 0; at < batch.size(); at += block_size_)
    write_block(batch.subspan(at, std::min<std::size_t>(block_size_, batch.size() - at)),
                atomic_ops);
}

ReadStatus BlockFifo::read(GroupId g, std::vector<Element>& out, std::uint64_t& atomic_ops) {
  std::int64_t& pending = pending_[g].ticket;
  if (pending < 0) {
    std::uint64_t r = read_ptr_.load(std::memory_order_acquire);
    for (;;) {
      if (r >= write_ptr_.load(std::memory_order_acquire)) return ReadStatus::kReadEmpty;
      ++atomic_ops;
      if (read_ptr_.compare_exchange_weak(r, r + 1, std::memory_order_acq_rel,
                                          std::memory_order_acquire))
        break;
    }
    pending = static_cast<std::int64_t>(r);
  }
  const auto ticket = static_cast<std::uint64_t>(pending);
  Slot& slot = slots_[ticket % block_num_];
  if (slot.seq.load(std::memory_order_acquire) != ticket + 1) return ReadStatus::kReadEmpty;
  const Element* src = block(ticket);
  out.insert(out.end(), src, src + slot.count);
  slot.seq.store(ticket + block_num_, std::memory_order_release);
  pending = -1;
  consumed_.fetch_add(1, std::memory_order_acq_rel);
  ++atomic_ops;
  return ReadStatus::kSuccess;
}

bool BlockFifo::empty() const {
  const std::uint64_t c = consumed_.load(std::memory_order_acquire);
  return c == write_ptr_.load(std::memory_order_acquire);
}

std::vector<Element> BlockFifo::snapshot() const {
  std::vector<Element> out;
  const std::uint64_t w = write_ptr_.load();
  const std::uint64_t lo = w > block_num_ ? w - block_num_ : 0;
  for (std::uint64_t t = lo; t < w; ++t) {
    const Slot& slot = slots_[t % block_num_];
    if (slot.seq.load() == t + 1) out.insert(out.end(), block(t), block(t) + slot.count);
  }
  return out;
}

std::vector<std::uint32_t> BlockFifo::pending_block_sizes() const {
  std::vector<std::uint32_t> out;
  const std::uint64_t w = write_ptr_.load();
  const std::uint64_t lo = w > block_num_ ? w - block_num_ : 0;
  for (std::uint64_t t = lo; t < w; ++t) {
    const Slot& slot = slots_[t % block_num_];
    if (slot.seq.load() == t + 1) out.push_back(slot.count);
  }
  return out;
}

}  // namespace mlmq
