#include "mlmq/l1_queues.hpp"

#include <algorithm>

namespace mlmq {

namespace {

template <typename Deque>
ReadStatus pop_front_into(Deque& d, std::size_t want, std::vector<Element>& out) {
  if (d.empty()) return ReadStatus::kReadEmpty;
  for (std::size_t i = 0; i < want && !d.empty(); ++i) out.push_back(d.pop_front());
  return ReadStatus::kSuccess;
}

WriteStatus status_for(std::size_t before, const std::vector<Element>& back) {
  return back.size() > before ? WriteStatus::kWriteBack : WriteStatus::kSuccess;
}

}  // namespace

// --- vector -----------------------------------------------------------------

L1Vector::L1Vector(std::uint32_t capacity, std::uint32_t wb)
    : capacity_(capacity), wb_(wb), buf_(std::min<std::uint32_t>(capacity, 4096)) {}

ReadStatus L1Vector::read(std::size_t want, std::vector<Element>& out) {
  return pop_front_into(buf_, want, out);
}

WriteStatus L1Vector::write(std::span<const Element> batch, std::vector<Element>& back) {
  if (batch.empty()) return WriteStatus::kSuccess;
  const std::size_t before = back.size();
  for (const Element& e : batch) {
    if (buf_.size() < capacity_) buf_.push_back(e);
    else back.push_back(e);
  }
  if (wb_ != 0 && ++write_counter_ == wb_) {
    while (!buf_.empty()) back.push_back(buf_.pop_front());
    write_counter_ = 0;
    ++flushes_;
  }
  return status_for(before, back);
}

// --- near-far ---------------------------------------------------------------

L1NearFar::L1NearFar(std::uint32_t capacity, Distance delta)
    : capacity_(capacity), delta_(delta), near_(std::min<std::uint32_t>(capacity, 4096)) {}

bool L1NearFar::partition_holds() const {
  bool ok = true;
  near_.for_each([&](const Element& e) { ok = ok && e.dist < threshold_; });
  for (const Element& e : far_) ok = ok && e.dist >= threshold_;
  return ok;
}

ReadStatus L1NearFar::read(std::size_t want, std::vector<Element>& out) {
  if (near_.empty() && !far_.empty()) {
    Distance lo = kInfinity;
    for (const Element& e : far_) lo = std::min(lo, e.dist);
    threshold_ = lo > kInfinity - delta_ ? kInfinity : lo + delta_;
    std::size_t keep = 0;
    for (const Element& e : far_) {
      if (e.dist < threshold_) near_.push_back(e);
      else far_[keep++] = e;
    }
    far_.resize(keep);
  }
  return pop_front_into(near_, want, out);
}

WriteStatus L1NearFar::write(std::span<const Element> batch, std::vector<Element>& back) {
  const std::size_t before = back.size();
  for (const Element& e : batch) {
    if (e.dist < threshold_) near_.push_back(e);
    else far_.push_back(e);
  }
  while (size() > capacity_) {
    if (!far_.empty()) {
      back.push_back(far_.back());
      far_.pop_back();
    } else {
      back.push_back(near_.pop_back());
    }
  }
  return status_for(before, back);
}

// --- filter -----------------------------------------------------------------

L1Filter::L1Filter(std::uint32_t capacity, Distance window, std::optional<Distance> initial_bound)
    : capacity_(capacity), window_(window), buf_(std::min<std::uint32_t>(capacity, 4096)) {
  if (initial_bound) {
    bound_ = *initial_bound;
    rebase_pending_ = false;
  }
}

ReadStatus L1Filter::read(std::size_t want, std::vector<Element>& out) {
  if (buf_.empty()) {
    rebase_pending_ = true;
    return ReadStatus::kReadEmpty;
  }
  return pop_front_into(buf_, want, out);
}

WriteStatus L1Filter::write(std::span<const Element> batch, std::vector<Element>& back) {
  if (batch.empty()) return WriteStatus::kSuccess;
  const std::size_t before = back.size();
  if (rebase_pending_ && buf_.empty()) {
    Distance lo = kInfinity;
    for (const Element& e : batch) lo = std::min(lo, e.dist);
    bound_ = lo > kInfinity - window_ ? kInfinity : lo + window_;
  }
  rebase_pending_ = false;
  for (const Element& e : batch) {
    if (e.dist <= bound_ && buf_.size() < capacity_) buf_.push_back(e);
    else back.push_back(e);
  }
  return status_for(before, back);
}

// --- shortest-length-first --------------------------------------------------

L1Slf::L1Slf(std::uint32_t capacity)
    : capacity_(capacity), buf_(std::min<std::uint32_t>(capacity, 4096)) {}

ReadStatus L1Slf::read(std::size_t want, std::vector<Element>& out) {
  return pop_front_into(buf_, want, out);
}

WriteStatus L1Slf::write(std::span<const Element> batch, std::vector<Element>& back) {
  if (batch.empty()) return WriteStatus::kSuccess;
  const std::size_t before = back.size();
  std::size_t i = 0;
  if (buf_.empty()) buf_.push_back(batch[i++]);
  const Distance head = buf_.front().dist;
  for (; i < batch.size(); ++i) {
    if (batch[i].dist < head) buf_.push_front(batch[i]);
    else buf_.push_back(batch[i]);
  }
  while (buf_.size() > capacity_) back.push_back(buf_.pop_back());
  return status_for(before, back);
}

// --- dispatch ---------------------------------------------------------------

L1Queue make_l1_queue(const MlmqConfig& cfg) {
  switch (cfg.l1_type) {
    case L1Type::kVector: return L1Vector(cfg.l1.capacity, cfg.l1.wb);
    case L1Type::kNearFar: return L1NearFar(cfg.l1.capacity, cfg.l1.delta_nf);
    case L1Type::kFilter: return L1Filter(cfg.l1.capacity, cfg.l1.filter_window);
    case L1Type::kSlf: return L1Slf(cfg.l1.capacity);
  }
  return L1Vector(cfg.l1.capacity, cfg.l1.wb);
}

ReadStatus l1_read(L1Queue& q, std::size_t want, std::vector<Element>& out) {
  return std::visit([&](auto& v) { return v.read(want, out); }, q);
}

WriteStatus l1_write(L1Queue& q, std::span<const Element> batch, std::vector<Element>& back) {
  return std::visit([&](auto& v) { return v.write(batch, back); }, q);
}

std::size_t l1_size(const L1Queue& q) {
  return std::visit([](const auto& v) { return v.size(); }, q);
}

std::uint64_t l1_flushes(const L1Queue& q) {
  return std::visit([](const auto& v) { return v.flushes(); }, q);
}

std::vector<Element> l1_contents(const L1Queue& q) {
  std::vector<Element> out;
  std::visit([&](const auto& v) { v.for_each([&](const Element& e) { out.push_back(e); }); }, q);
  return out;
}

}  // namespace mlmq
