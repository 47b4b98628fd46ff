#pragma once

#include <cstdint>
#include <limits>

namespace mlmq {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint64_t;
using Weight = std::uint32_t;
using Distance = std::uint64_t;

inline constexpr Distance kInfinity = std::numeric_limits<Distance>::max();

// The unit of queue traffic. Smaller dist means higher priority. Kept
// trivially default-constructible so large block buffers can be allocated
// without touching every page.
struct Element {
  VertexId id;
  Distance dist;

  friend bool operator==(const Element&, const Element&) = default;
};

inline bool dist_less(const Element& a, const Element& b) {
  return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
}

enum class ReadStatus { kSuccess, kReadEmpty };
enum class WriteStatus { kSuccess, kWriteBack };

}  // namespace mlmq
