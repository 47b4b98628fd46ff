#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mlmq/config.hpp"
#include "mlmq/element.hpp"
#include "mlmq/ring_deque.hpp"

namespace mlmq {

// Group-local queues. Every variant offers the same two primitives:
//   read(want, out)         appends up to `want` elements to `out`
//   write(batch, back)      admits `batch`; anything the queue refuses or
//                           evicts is appended to `back` for the next level
// and returns kWriteBack exactly when `back` grew. Empty writes are no-ops.

// FIFO with periodic flushing: every `wb` non-empty writes the entire buffer
// is handed down, so a group cannot keep feeding on its own stale work.
class L1Vector {
 public:
  L1Vector(std::uint32_t capacity, std::uint32_t wb);

  ReadStatus read(std::size_t want, std::vector<Element>& out);
  WriteStatus write(std::span<const Element> batch, std::vector<Element>& back);

  std::size_t size() const { return buf_.size(); }
  std::uint32_t write_counter() const { return write_counter_; }
  std::uint64_t flushes() const { return flushes_; }
  template <typename F> void for_each(F&& f) const { buf_.for_each(f); }

 private:
  std::uint32_t capacity_;
  std::uint32_t wb_;
  std::uint32_t write_counter_ = 0;
  std::uint64_t flushes_ = 0;
  RingDeque<Element> buf_;
};

// Two buffers split at a rolling threshold. Elements below the threshold are
// served first; when the near side runs dry the threshold is rebased to
// (smallest far distance + delta) and the far side is repartitioned.
class L1NearFar {
 public:
  L1NearFar(std::uint32_t capacity, Distance delta);

  ReadStatus read(std::size_t want, std::vector<Element>& out);
  WriteStatus write(std::span<const Element> batch, std::vector<Element>& back);

  std::size_t size() const { return near_.size() + far_.size(); }
  Distance threshold() const { return threshold_; }
  std::size_t near_size() const { return near_.size(); }
  std::size_t far_size() const { return far_.size(); }
  bool partition_holds() const;
  std::uint64_t flushes() const { return 0; }
  template <typename F> void for_each(F&& f) const {
    near_.for_each(f);
    for (const Element& e : far_) f(e);
  }

 private:
  std::uint32_t capacity_;
  Distance delta_;
  Distance threshold_ = 0;
  RingDeque<Element> near_;
  std::vector<Element> far_;
};

// Single buffer admitting only elements at or below a bound; everything else
// is written back immediately. The bound is rebased to (smallest incoming
// distance + window) on the first write after the buffer was found empty.
class L1Filter {
 public:
  L1Filter(std::uint32_t capacity, Distance window,
           std::optional<Distance> initial_bound = std::nullopt);

  ReadStatus read(std::size_t want, std::vector<Element>& out);
  WriteStatus write(std::span<const Element> batch, std::vector<Element>& back);

  std::size_t size() const { return buf_.size(); }
  Distance bound() const { return bound_; }
  std::uint64_t flushes() const { return 0; }
  template <typename F> void for_each(F&& f) const { buf_.for_each(f); }

 private:
  std::uint32_t capacity_;
  Distance window_;
  Distance bound_ = 0;
  bool rebase_pending_ = true;
  RingDeque<Element> buf_;
};

// Shortest-length-first deque. Each write compares against the head as it
// was when the write began: shorter elements go to the head, the rest to the
// tail. Reads take from the head; overflow is evicted from the tail.
class L1Slf {
 public:
  explicit L1Slf(std::uint32_t capacity);

  ReadStatus read(std::size_t want, std::vector<Element>& out);
  WriteStatus write(std::span<const Element> batch, std::vector<Element>& back);

  std::size_t size() const { return buf_.size(); }
  const Element& head() const { return buf_.front(); }
  std::uint64_t flushes() const { return 0; }
  template <typename F> void for_each(F&& f) const { buf_.for_each(f); }

 private:
  std::uint32_t capacity_;
  RingDeque<Element> buf_;
};

using L1Queue = std::variant<L1Vector, L1NearFar, L1Filter, L1Slf>;

// `cfg` must already be resolved (absolute distance parameters).
L1Queue make_l1_queue(const MlmqConfig& cfg);

ReadStatus l1_read(L1Queue& q, std::size_t want, std::vector<Element>& out);
WriteStatus l1_write(L1Queue& q, std::span<const Element> batch, std::vector<Element>& back);
std::size_t l1_size(const L1Queue& q);
std::uint64_t l1_flushes(const L1Queue& q);
std::vector<Element> l1_contents(const L1Queue& q);

}  // namespace mlmq
