#include "mlmq/features.hpp"

#include <algorithm>
#include <cmath>

namespace mlmq {

GraphFeatures GraphFeatures::from_array(const std::array<double, kCount>& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
}

const std::array<const char*, GraphFeatures::kCount>& GraphFeatures::names() {
  static const std::array<const char*, kCount> n = {
      "m", "nnz", "avg_nnz", "max_nnz", "dev_nnz", "avg_weight", "dev_weight", "max_weight"};
  return n;
}

GraphFeatures extract_features(const CsrGraph& g) {
  GraphFeatures f;
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  f.m = static_cast<double>(n);
  f.nnz = static_cast<double>(m);
  if (n == 0) return f;

  // Sums of squares are accumulated exactly in integers, so the result does
  // not depend on summation order.
  const auto offsets = g.row_offsets();
  unsigned __int128 deg_sq = 0;
  std::uint64_t max_deg = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint64_t d = offsets[v + 1] - offsets[v];
    deg_sq += static_cast<unsigned __int128>(d) * d;
    max_deg = std::max(max_deg, d);
  }
  const double nn = static_cast<double>(n);
  f.avg_nnz = f.nnz / nn;
  f.max_nnz = static_cast<double>(max_deg);
  f.dev_nnz = std::sqrt(std::max(0.0, static_cast<double>(deg_sq) / nn - f.avg_nnz * f.avg_nnz));

  if (m == 0) return f;
  unsigned __int128 w_sum = 0, w_sq = 0;
  Weight max_w = 0;
  for (Weight w : g.weights()) {
    w_sum += w;
    w_sq += static_cast<unsigned __int128>(w) * w;
    max_w = std::max(max_w, w);
  }
  const double mm = static_cast<double>(m);
  f.avg_weight = static_cast<double>(w_sum) / mm;
  f.max_weight = static_cast<double>(max_w);
  f.dev_weight = std::sqrt(std::max(0.0, static_cast<double>(w_sq) / mm - f.avg_weight * f.avg_weight));
  return f;
}

nlohmann::json to_json(const GraphFeatures& f) {
  nlohmann::json j;
  const auto values = f.as_array();
  for (std::size_t i = 0; i < GraphFeatures::kCount; ++i) j[GraphFeatures::names()[i]] = values[i];
  return j;
}

}  // namespace mlmq
