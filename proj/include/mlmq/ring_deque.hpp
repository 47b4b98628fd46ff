#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace mlmq {

// Growable circular double-ended buffer. Logical capacity limits are enforced
// by the queues that own one; this only manages storage.
template <typename T>
class RingDeque {
 public:
  explicit RingDeque(std::size_t initial = 16) : buf_(round_up(initial)) {}

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  const T& front() const { return buf_[head_]; }
  const T& back() const { return buf_[(head_ + size_ - 1) & mask()]; }
  const T& operator[](std::size_t i) const { return buf_[(head_ + i) & mask()]; }

  void push_back(const T& v) {
    if (size_ == buf_.size()) grow();
    buf_[(head_ + size_) & mask()] = v;
    ++size_;
  }

  void push_front(const T& v) {
    if (size_ == buf_.size()) grow();
    head_ = (head_ + buf_.size() - 1) & mask();
    buf_[head_] = v;
    ++size_;
  }

  T pop_front() {
    T v = buf_[head_];
    head_ = (head_ + 1) & mask();
    --size_;
    return v;
  }

  T pop_back() {
    --size_;
    return buf_[(head_ + size_) & mask()];
  }

  void clear() {
    head_ = 0;
    size_ = 0;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < size_; ++i) f((*this)[i]);
  }

 private:
  static std::size_t round_up(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
  }
  std::size_t mask() const { return buf_.size() - 1; }

  void grow() {
    std::vector<T> next(buf_.size() * 2);
    for (std::size_t i = 0; i < size_; ++i) next[i] = (*this)[i];
    buf_ = std::move(next);
    head_ = 0;
  }

  std::vector<T> buf_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

}  // namespace mlmq
