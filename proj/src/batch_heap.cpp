#include "mlmq/batch_heap.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <thread>

#include "mlmq/error.hpp"

namespace mlmq {

BatchHeap::BatchHeap(std::uint32_t batch, std::uint32_t capacity_nodes)
    : batch_(batch),
      capacity_(capacity_nodes),
      nodes_(new Node[capacity_nodes]),
      data_(new Element[std::size_t(capacity_nodes) * batch]) {
  if (batch == 0 || capacity_nodes == 0)
    throw Error(ErrorKind::kInvalidParameter, "batch heap needs node_batch >= 1 and capacity >= 1");
}

void BatchHeap::merge_keep_smallest(std::uint32_t i, std::vector<Element>& carry) {
  Element* it = items(i);
  const std::uint32_t n = node(i).count;
  thread_local std::vector<Element> merged;
  merged.resize(n + carry.size());
  std::merge(it, it + n, carry.begin(), carry.end(), merged.begin(), dist_less);
  std::copy(merged.begin(), merged.begin() + n, it);
  std::copy(merged.begin() + n, merged.end(), carry.begin());
}

void BatchHeap::insert(std::span<const Element> elements, std::uint64_t& atomic_ops) {
  if (elements.empty()) return;
  thread_local std::vector<Element> sorted;
  sorted.assign(elements.begin(), elements.end());
  std::sort(sorted.begin(), sorted.end(), dist_less);
  for (std::size_t at = 0; at < sorted.size(); at += batch_) {
    const std::size_t n = std::min<std::size_t>(batch_, sorted.size() - at);
    insert_chunk(std::span<const Element>(sorted.data() + at, n), atomic_ops);
  }
}

void BatchHeap::insert_chunk(std::span<const Element> chunk, std::uint64_t& atomic_ops) {
  lock(1, atomic_ops);
  const std::uint32_t target = size_.load(std::memory_order_relaxed) + 1;
  if (target > capacity_) {
    unlock(1);
    throw Error(ErrorKind::kQueueOverflow,
                "L2 heap full: " + std::to_string(capacity_) + " nodes of " +
                    std::to_string(batch_) + " elements in use; increase node_capacity");
  }
  size_.store(target, std::memory_order_release);
  thread_local std::vector<Element> carry;
  carry.assign(chunk.begin(), chunk.end());
  if (target == 1) {
    std::copy(carry.begin(), carry.end(), items(1));
    node(1).count = static_cast<std::uint32_t>(carry.size());
    node(1).filled = true;
    unlock(1);
    return;
  }
  // Walk from the root towards target; the path is read off the bits of
  // target below its leading one.
  const int depth = std::bit_width(target) - 1;
  std::uint32_t cur = 1;
  for (int level = depth - 1; level >= 0; --level) {
    merge_keep_smallest(cur, carry);
    const std::uint32_t next = 2 * cur + ((target >> level) & 1u);
    lock(next, atomic_ops);
    if (next == target) {
      std::copy(carry.begin(), carry.end(), items(next));
      node(next).count = static_cast<std::uint32_t>(carry.size());
      node(next).filled = true;
      unlock(cur);
      unlock(next);
      return;
    }
    unlock(cur);
    cur = next;
  }
}

std::size_t BatchHeap::extract(std::size_t want, std::vector<Element>& out,
                               std::uint64_t& atomic_ops) {
  if (want == 0) return 0;
  lock(1, atomic_ops);
  const std::uint32_t size = size_.load(std::memory_order_relaxed);
  if (size == 0) {
    unlock(1);
    return 0;
  }
  Distance bound = kInfinity;
  for (std::uint32_t c = 2; c <= 3 && c <= size; ++c) {
    lock(c, atomic_ops);
    if (present(c)) bound = std::min(bound, min_of(c));
  }
  Node& root = node(1);
  Element* it = items(1);
  std::size_t taken = 0;
  while (taken < root.count && taken < want && (taken == 0 || it[taken].dist <= bound)) ++taken;
  out.insert(out.end(), it, it + taken);
  std::copy(it + taken, it + root.count, it);
  root.count -= static_cast<std::uint32_t>(taken);
  for (std::uint32_t c = 2; c <= 3 && c <= size; ++c) unlock(c);

  if (root.count > 0) {
    sift_down(1, atomic_ops);
    return taken;
  }
  if (size == 1) {
    root.filled = false;
    size_.store(0, std::memory_order_release);
    unlock(1);
    return taken;
  }
  // Refill the root from the last node. Its inserter may still be on the way
  // down; it never needs the root again, so waiting here is safe.
  const std::uint32_t last = size;
  lock(last, atomic_ops);
  while (!node(last).filled) {
    unlock(last);
    std::this_thread::yield();
    lock(last, atomic_ops);
  }
  std::copy(items(last), items(last) + node(last).count, it);
  root.count = node(last).count;
  node(last).count = 0;
  node(last).filled = false;
  size_.store(size - 1, std::memory_order_release);
  unlock(last);
  sift_down(1, atomic_ops);
  return taken;
}

void BatchHeap::sift_down(std::uint32_t i, std::uint64_t& atomic_ops) {
  thread_local std::vector<Element> carry;
  for (;;) {
    const std::uint32_t size = size_.load(std::memory_order_acquire);
    const std::uint32_t l = 2 * i;
    const std::uint32_t r = l + 1;
    const bool has_l = l <= size && l <= capacity_;
    const bool has_r = r <= size && r <= capacity_;
    if (has_l) lock(l, atomic_ops);
    if (has_r) lock(r, atomic_ops);
    std::uint32_t best = 0;
    if (has_l && present(l)) best = l;
    if (has_r && present(r) && (best == 0 || min_of(r) < min_of(best))) best = r;
    const bool swap = best != 0 && node(i).count > 0 && min_of(best) < min_of(i);
    if (!swap) {
      if (has_r) unlock(r);
      if (has_l) unlock(l);
      unlock(i);
      return;
    }
    // i takes the smallest elements of the pair; best keeps its count.
    carry.assign(items(best), items(best) + node(best).count);
    merge_keep_smallest(i, carry);
    std::copy(carry.begin(), carry.end(), items(best));
    const std::uint32_t other = best == l ? r : l;
    if (other == r ? has_r : has_l) unlock(other);
    unlock(i);
    i = best;
  }
}

std::vector<Element> BatchHeap::node_contents(std::uint32_t i) const {
  if (i == 0 || i > capacity_ || !node(i).filled) return {};
  return std::vector<Element>(items(i), items(i) + node(i).count);
}

std::vector<Element> BatchHeap::snapshot() const {
  std::vector<Element> out;
  const std::uint32_t size = node_count();
  for (std::uint32_t i = 1; i <= size; ++i) {
    auto part = node_contents(i);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

bool BatchHeap::heap_holds() const {
  const std::uint32_t size = node_count();
  for (std::uint32_t i = 1; i <= size; ++i) {
    if (!node(i).filled || node(i).count == 0 || node(i).count > batch_) return false;
    const Element* it = items(i);
    if (!std::is_sorted(it, it + node(i).count, dist_less)) return false;
    if (i > 1 && min_of(i / 2) > min_of(i)) return false;
  }
  for (std::uint32_t i = size + 1; i <= capacity_ && i <= size + 2; ++i)
    if (node(i).filled) return false;
  return true;
}

MultiQueue::MultiQueue(TerminationCounters& counters, std::uint32_t pnum, std::uint32_t batch,
                       std::uint32_t capacity_nodes, std::size_t num_groups)
    : L2Queue(counters), cursor_(num_groups) {
  if (pnum == 0) throw Error(ErrorKind::kInvalidParameter, "multi-queue needs pnum >= 1");
  heaps_.reserve(pnum);
  for (std::uint32_t i = 0; i < pnum; ++i)
    heaps_.push_back(std::make_unique<BatchHeap>(batch, capacity_nodes));
  for (std::size_t g = 0; g < num_groups; ++g) cursor_[g].next = static_cast<std::uint32_t>(g % pnum);
}

void MultiQueue::do_write(GroupId g, std::span<const Element> batch, std::uint64_t& atomic_ops) {
  std::uint32_t& next = cursor_[g].next;
  heaps_[next]->insert(batch, atomic_ops);
  next = (next + 1) % pnum();
}

std::size_t MultiQueue::do_read(GroupId g, std::size_t want, std::vector<Element>& out,
                                std::uint64_t& atomic_ops) {
  return heaps_[read_queue(g)]->extract(want, out, atomic_ops);
}

std::vector<Element> MultiQueue::snapshot() const {
  std::vector<Element> out;
  for (const auto& h : heaps_) {
    auto part = h->snapshot();
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

bool MultiQueue::empty() const {
  return std::all_of(heaps_.begin(), heaps_.end(), [](const auto& h) { return h->empty(); });
}

bool MultiQueue::discipline_holds() const {
  return std::all_of(heaps_.begin(), heaps_.end(), [](const auto& h) { return h->heap_holds(); });
}

}  // namespace mlmq
