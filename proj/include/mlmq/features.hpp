#pragma once

#include <array>
#include <cstdint>

#include "json.hpp"
#include "mlmq/graph.hpp"

namespace mlmq {

// Lightweight structural features available at load time.
struct GraphFeatures {
  double m = 0;
  double nnz = 0;
  double avg_nnz = 0;
  double max_nnz = 0;
  double dev_nnz = 0;
  double avg_weight = 0;
  double dev_weight = 0;
  double max_weight = 0;

  static constexpr std::size_t kCount = 8;
  std::array<double, kCount> as_array() const {
    return {m, nnz, avg_nnz, max_nnz, dev_nnz, avg_weight, dev_weight, max_weight};
  }
  static GraphFeatures from_array(const std::array<double, kCount>& a);
  static const std::array<const char*, kCount>& names();
};

// One pass over the CSR arrays; standard deviations are population values.
GraphFeatures extract_features(const CsrGraph& g);

nlohmann::json to_json(const GraphFeatures& f);

}  // namespace mlmq
