#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "mlmq/element.hpp"
#include "mlmq/l2_queue.hpp"

namespace mlmq {

// Concurrent heap of element batches. Nodes form a complete binary tree
// (1-based, children of i at 2i and 2i+1); each holds up to `batch` elements
// sorted ascending and its own lock. Heap order is over node minima.
//
// All lock acquisitions run root to leaf. An insert claims the next free node
// while holding the root and pushes its batch down the path to that node,
// swapping smaller elements into each node it passes; the claimed node is
// filled while its parent is still locked, so until then nobody can observe
// it as a missing child of an updated parent. A delete takes the root's
// elements that are no larger than either child's minimum, refills an empty
// root from the last node, and sifts down.
class BatchHeap {
 public:
  BatchHeap(std::uint32_t batch, std::uint32_t capacity_nodes);

  void insert(std::span<const Element> elements, std::uint64_t& atomic_ops);
  // Appends at least one element unless the heap is empty, at most `want`.
  std::size_t extract(std::size_t want, std::vector<Element>& out, std::uint64_t& atomic_ops);

  std::uint32_t batch() const { return batch_; }
  std::uint32_t capacity_nodes() const { return capacity_; }
  std::uint32_t node_count() const { return size_.load(std::memory_order_acquire); }
  bool empty() const { return node_count() == 0; }

  // Quiescent only.
  std::vector<Element> snapshot() const;
  std::vector<Element> node_contents(std::uint32_t i) const;
  bool heap_holds() const;

 private:
  struct Node {
    std::mutex lock;
    std::uint32_t count = 0;
    bool filled = false;
  };

  Element* items(std::uint32_t i) const { return data_.get() + std::size_t(i - 1) * batch_; }
  Distance min_of(std::uint32_t i) const { return items(i)[0].dist; }
  void lock(std::uint32_t i, std::uint64_t& atomic_ops) {
    nodes_[i - 1].lock.lock();
    ++atomic_ops;
  }
  void unlock(std::uint32_t i) { nodes_[i - 1].lock.unlock(); }
  Node& node(std::uint32_t i) const { return nodes_[i - 1]; }
  bool present(std::uint32_t i) const {
    return i <= capacity_ && node(i).filled && node(i).count > 0;
  }

  // Node i keeps the node(i).count smallest of its elements and `carry`;
  // the rest are left in `carry`, ascending.
  void merge_keep_smallest(std::uint32_t i, std::vector<Element>& carry);
  void insert_chunk(std::span<const Element> chunk, std::uint64_t& atomic_ops);
  // Entered with node i locked; returns with nothing locked.
  void sift_down(std::uint32_t i, std::uint64_t& atomic_ops);

  std::uint32_t batch_;
  std::uint32_t capacity_;
  std::unique_ptr<Node[]> nodes_;
  std::unique_ptr<Element[]> data_;
  // Modified only while the root is locked.
  std::atomic<std::uint32_t> size_{0};
};

class PriorityQueue final : public L2Queue {
 public:
  PriorityQueue(TerminationCounters& counters, std::uint32_t batch, std::uint32_t capacity_nodes)
      : L2Queue(counters), heap_(batch, capacity_nodes) {}

  L2Type type() const override { return L2Type::kPriority; }
  std::vector<Element> snapshot() const override { return heap_.snapshot(); }
  bool empty() const override { return heap_.empty(); }
  bool discipline_holds() const override { return heap_.heap_holds(); }
  const BatchHeap& heap() const { return heap_; }

 protected:
  void do_write(GroupId, std::span<const Element> batch, std::uint64_t& atomic_ops) override {
    heap_.insert(batch, atomic_ops);
  }
  std::size_t do_read(GroupId, std::size_t want, std::vector<Element>& out,
                      std::uint64_t& atomic_ops) override {
    return heap_.extract(want, out, atomic_ops);
  }

 private:
  BatchHeap heap_;
};

// pnum independent heaps. Group g always reads heap g % pnum; its writes go
// to one heap each, cycling through all of them starting at its read heap.
class MultiQueue final : public L2Queue {
 public:
  MultiQueue(TerminationCounters& counters, std::uint32_t pnum, std::uint32_t batch,
             std::uint32_t capacity_nodes, std::size_t num_groups);

  L2Type type() const override { return L2Type::kMulti; }
  std::vector<Element> snapshot() const override;
  bool empty() const override;
  bool discipline_holds() const override;

  std::uint32_t pnum() const { return static_cast<std::uint32_t>(heaps_.size()); }
  std::uint32_t read_queue(GroupId g) const { return g % pnum(); }
  std::uint32_t next_write_queue(GroupId g) const { return cursor_[g].next; }
  const BatchHeap& heap(std::uint32_t i) const { return *heaps_[i]; }

 protected:
  void do_write(GroupId g, std::span<const Element> batch, std::uint64_t& atomic_ops) override;
  std::size_t do_read(GroupId g, std::size_t want, std::vector<Element>& out,
                      std::uint64_t& atomic_ops) override;

 private:
  struct alignas(64) Cursor {
    std::uint32_t next = 0;
  };
  std::vector<std::unique_ptr<BatchHeap>> heaps_;
  std::vector<Cursor> cursor_;
};

}  // namespace mlmq
