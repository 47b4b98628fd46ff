#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

namespace mlmq {

using GroupId = std::uint32_t;

// Delayed-count emptiness detection. Every element written to L2 bumps
// global_reserve before it becomes visible. Elements read from L2 are
// counted privately by the reading group and only folded into global_done
// when that group's whole cascade has run dry, so reserve == done certifies
// that nothing is queued or in flight anywhere.
class TerminationCounters {
 public:
  explicit TerminationCounters(std::size_t num_groups) : local_done_(num_groups) {}

  void add_reserve(std::uint64_t n) { reserve_.fetch_add(n, std::memory_order_seq_cst); }

  void note_read(GroupId g, std::uint64_t n) { local_done_[g].value += n; }

  // Returns true when a non-zero local count was published.
  bool flush(GroupId g) {
    auto& local = local_done_[g].value;
    if (local == 0) return false;
    done_.fetch_add(local, std::memory_order_seq_cst);
    local = 0;
    return true;
  }

  std::uint64_t local_done(GroupId g) const { return local_done_[g].value; }
  std::uint64_t reserve() const { return reserve_.load(std::memory_order_seq_cst); }
  std::uint64_t done() const { return done_.load(std::memory_order_seq_cst); }
  std::size_t num_groups() const { return local_done_.size(); }

  // done is read first: reserve only grows and never trails done, so equal
  // values mean the two were equal at the moment done was read.
  bool is_empty() const {
    const std::uint64_t d = done();
    const std::uint64_t r = reserve();
    return r == d;
  }

 private:
  struct alignas(64) Local {
    std::uint64_t value = 0;
  };
  alignas(64) std::atomic<std::uint64_t> reserve_{0};
  alignas(64) std::atomic<std::uint64_t> done_{0};
  std::vector<Local> local_done_;
};

inline bool l2_is_empty(const TerminationCounters& c) { return c.is_empty(); }

}  // namespace mlmq
