#include "mlmq/l0_queue.hpp"

namespace mlmq {

L0Queue::L0Queue(std::uint32_t lanes, std::uint32_t capacity_per_lane)
    : lanes_(lanes),
      capacity_(capacity_per_lane),
      storage_(static_cast<std::size_t>(lanes) * capacity_per_lane),
      head_(lanes, 0),
      count_(lanes, 0) {}

ReadStatus L0Queue::read(std::size_t want, std::vector<Element>& out) {
  if (total_ == 0) return ReadStatus::kReadEmpty;
  std::size_t taken = 0;
  while (taken < want && total_ > 0) {
    const std::uint32_t lane = read_lane_;
    read_lane_ = (read_lane_ + 1) % lanes_;
    if (count_[lane] == 0) continue;
    out.push_back(slot(lane, 0));
    head_[lane] = (head_[lane] + 1) % capacity_;
    --count_[lane];
    --total_;
    ++taken;
  }
  return ReadStatus::kSuccess;
}

void L0Queue::drain_all(std::vector<Element>& out) {
  for (std::uint32_t lane = 0; lane < lanes_; ++lane) {
    for (std::uint32_t i = 0; i < count_[lane]; ++i) out.push_back(slot(lane, i));
    head_[lane] = 0;
    count_[lane] = 0;
  }
  total_ = 0;
}

WriteStatus L0Queue::write(std::span<const Element> batch, std::vector<Element>& overflow) {
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const std::uint32_t lane = write_lane_;
    if (count_[lane] == capacity_) {
      drain_all(overflow);
      overflow.insert(overflow.end(), batch.begin() + static_cast<std::ptrdiff_t>(i), batch.end());
      return WriteStatus::kWriteBack;
    }
    slot(lane, count_[lane]) = batch[i];
    ++count_[lane];
    ++total_;
    write_lane_ = (write_lane_ + 1) % lanes_;
  }
  return WriteStatus::kSuccess;
}

}  // namespace mlmq
