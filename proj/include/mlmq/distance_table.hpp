#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <vector>

#include "mlmq/element.hpp"

namespace mlmq {

// Shared tentative distances. Entries only ever decrease; concurrent writers go
// through relax_min, which is a compare-and-minimize.
class DistanceTable {
 public:
  explicit DistanceTable(std::size_t num_vertices)
      : size_(num_vertices), dist_(new std::atomic<Distance>[num_vertices]) {
    for (std::size_t i = 0; i < size_; ++i)
      dist_[i].store(kInfinity, std::memory_order_relaxed);
  }

  std::size_t size() const { return size_; }

  Distance load(VertexId v) const {
    return dist_[v].load(std::memory_order_acquire);
  }

  void reset_source(VertexId source) {
    dist_[source].store(0, std::memory_order_release);
  }

  // Returns true iff the entry strictly decreased to `candidate`.
  bool relax_min(VertexId v, Distance candidate) {
    Distance current = dist_[v].load(std::memory_order_relaxed);
    while (candidate < current) {
      if (dist_[v].compare_exchange_weak(current, candidate,
                                         std::memory_order_acq_rel,
                                         std::memory_order_relaxed))
        return true;
    }
    return false;
  }

  std::vector<Distance> snapshot() const {
    std::vector<Distance> out(size_);
    for (std::size_t i = 0; i < size_; ++i)
      out[i] = dist_[i].load(std::memory_order_acquire);
    return out;
  }

 private:
  std::size_t size_;
  std::unique_ptr<std::atomic<Distance>[]> dist_;
};

}  // namespace mlmq
