#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mlmq/element.hpp"
#include "mlmq/graph.hpp"

namespace mlmq {

// Sequential reference solvers.
std::vector<Distance> dijkstra_oracle(const CsrGraph& g, VertexId source);
std::vector<Distance> bellman_ford_oracle(const CsrGraph& g, VertexId source);

struct Mismatch {
  VertexId vertex;
  Distance expected;
  Distance actual;
};

std::optional<Mismatch> find_first_mismatch(std::span<const Distance> expected,
                                            std::span<const Distance> actual);

}  // namespace mlmq
