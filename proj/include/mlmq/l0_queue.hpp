#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mlmq/element.hpp"

namespace mlmq {

// The lane-private level: one small FIFO per lane of a worker group. Only the
// owning group touches it.
class L0Queue {
 public:
  L0Queue(std::uint32_t lanes, std::uint32_t capacity_per_lane);

  // Appends up to `want` elements to `out`, taking one element per lane per
  // pass so the lanes drain evenly.
  ReadStatus read(std::size_t want, std::vector<Element>& out);

  // Places elements round-robin across lanes. When the next element's lane is
  // full, the whole L0 content plus every not-yet-placed element is appended
  // to `overflow` and the queue is left empty.
  WriteStatus write(std::span<const Element> batch, std::vector<Element>& overflow);

  std::uint32_t lanes() const { return lanes_; }
  std::uint32_t capacity_per_lane() const { return capacity_; }
  std::size_t lane_size(std::uint32_t lane) const { return count_[lane]; }
  std::size_t size() const { return total_; }
  bool empty() const { return total_ == 0; }

 private:
  Element& slot(std::uint32_t lane, std::uint32_t i) {
    return storage_[lane * capacity_ + (head_[lane] + i) % capacity_];
  }
  void drain_all(std::vector<Element>& out);

  std::uint32_t lanes_;
  std::uint32_t capacity_;
  std::vector<Element> storage_;
  std::vector<std::uint32_t> head_;
  std::vector<std::uint32_t> count_;
  std::size_t total_ = 0;
  std::uint32_t write_lane_ = 0;
  std::uint32_t read_lane_ = 0;
};

}  // namespace mlmq
