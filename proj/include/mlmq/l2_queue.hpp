#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mlmq/config.hpp"
#include "mlmq/element.hpp"
#include "mlmq/termination.hpp"

namespace mlmq {

// Globally shared queue, safe for concurrent use by every worker group.
// Accounting on the termination counters is done here so that no variant can
// get it wrong: reserve grows before elements become visible, reads are
// credited to the reading group, and a read that finds nothing publishes the
// group's local count.
class L2Queue {
 public:
  explicit L2Queue(TerminationCounters& counters) : counters_(counters) {}
  virtual ~L2Queue() = default;
  L2Queue(const L2Queue&) = delete;
  L2Queue& operator=(const L2Queue&) = delete;

  // `atomic_ops` accumulates the read-modify-write operations performed on
  // shared state on behalf of the caller.
  void write(GroupId g, std::span<const Element> batch, std::uint64_t& atomic_ops);
  ReadStatus read(GroupId g, std::size_t want, std::vector<Element>& out,
                  std::uint64_t& atomic_ops);

  // Writes (source, 0) straight to this queue. A second call throws.
  void bootstrap(GroupId g, VertexId source, std::uint64_t& atomic_ops);

  TerminationCounters& counters() { return counters_; }

  virtual L2Type type() const = 0;
  // The remaining members are for audits at quiescent points only.
  virtual std::vector<Element> snapshot() const = 0;
  virtual bool empty() const = 0;
  // Structural invariant of the variant (heap order, bucket placement).
  virtual bool discipline_holds() const { return true; }

 protected:
  virtual void do_write(GroupId g, std::span<const Element> batch, std::uint64_t& atomic_ops) = 0;
  // Appends delivered elements to `out` and returns how many were taken out
  // of storage (delivered plus any re-queued through requeue()).
  virtual std::size_t do_read(GroupId g, std::size_t want, std::vector<Element>& out,
                              std::uint64_t& atomic_ops) = 0;

  void requeue(GroupId g, std::span<const Element> batch, std::uint64_t& atomic_ops) {
    counters_.add_reserve(batch.size());
    ++atomic_ops;
    do_write(g, batch, atomic_ops);
  }

 private:
  TerminationCounters& counters_;
  std::atomic<bool> bootstrapped_{false};
};

struct L2Options {
  std::size_t num_groups = 1;
  // How long a writer may wait for a ring slot before giving up.
  std::chrono::milliseconds spin_budget{5000};
};

// `cfg` must be resolved.
std::unique_ptr<L2Queue> make_l2_queue(const MlmqConfig& cfg, TerminationCounters& counters,
                                       const L2Options& opts);

}  // namespace mlmq
