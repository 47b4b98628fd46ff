#include "mlmq/oracle.hpp"

#include <deque>
#include <functional>
#include <queue>
#include <utility>

#include "mlmq/error.hpp"

namespace mlmq {

std::vector<Distance> dijkstra_oracle(const CsrGraph& g, VertexId source) {
  if (source >= g.num_vertices()) throw Error(ErrorKind::kInvalidSource, "source out of range");
  std::vector<Distance> dist(g.num_vertices(), kInfinity);
  using Item = std::pair<Distance, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0;
  heap.push({0, source});
  const auto cols = g.col_indices();
  const auto w = g.weights();
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (EdgeIndex k = g.edge_begin(u); k < g.edge_end(u); ++k) {
      const Distance nd = d + w[k];
      if (nd < dist[cols[k]]) {
        dist[cols[k]] = nd;
        heap.push({nd, cols[k]});
      }
    }
  }
  return dist;
}

std::vector<Distance> bellman_ford_oracle(const CsrGraph& g, VertexId source) {
  if (source >= g.num_vertices()) throw Error(ErrorKind::kInvalidSource, "source out of range");
  std::vector<Distance> dist(g.num_vertices(), kInfinity);
  std::vector<bool> queued(g.num_vertices(), false);
  std::deque<VertexId> work;
  dist[source] = 0;
  work.push_back(source);
  queued[source] = true;
  const auto cols = g.col_indices();
  const auto w = g.weights();
  while (!work.empty()) {
    const VertexId u = work.front();
    work.pop_front();
    queued[u] = false;
    for (EdgeIndex k = g.edge_begin(u); k < g.edge_end(u); ++k) {
      const VertexId v = cols[k];
      if (dist[u] + w[k] < dist[v]) {
        dist[v] = dist[u] + w[k];
        if (!queued[v]) {
          queued[v] = true;
          work.push_back(v);
        }
      }
    }
  }
  return dist;
}

std::optional<Mismatch> find_first_mismatch(std::span<const Distance> expected,
                                            std::span<const Distance> actual) {
  const std::size_t n = std::min(expected.size(), actual.size());
  for (std::size_t i = 0; i < n; ++i)
    if (expected[i] != actual[i])
      return Mismatch{static_cast<VertexId>(i), expected[i], actual[i]};
  if (expected.size() != actual.size()) {
    const std::size_t i = n;
    return Mismatch{static_cast<VertexId>(i), i < expected.size() ? expected[i] : kInfinity,
                    i < actual.size() ? actual[i] : kInfinity};
  }
  return std::nullopt;
}

}  // namespace mlmq
