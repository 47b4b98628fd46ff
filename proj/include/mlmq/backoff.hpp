#pragma once

#include <chrono>
#include <cstdint>
#include <thread>

namespace mlmq {

// Yield first, then sleep with exponentially growing naps. Hosts may run far
// more worker groups than cores, so waiting must give the CPU away.
class Backoff {
 public:
  explicit Backoff(std::chrono::microseconds max_nap = std::chrono::microseconds(100))
      : max_nap_(max_nap) {}

  void pause() {
    if (round_ < kYieldRounds) {
      ++round_;
      std::this_thread::yield();
      return;
    }
    std::this_thread::sleep_for(nap_);
    if (nap_ < max_nap_) nap_ *= 2;
  }

  void reset() {
    round_ = 0;
    nap_ = std::chrono::microseconds(1);
  }

 private:
  static constexpr int kYieldRounds = 8;
  int round_ = 0;
  std::chrono::microseconds nap_{1};
  std::chrono::microseconds max_nap_;
};

}  // namespace mlmq
