#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlmq/element.hpp"

namespace mlmq {

// Compressed sparse-row weighted digraph. Immutable once built.
class CsrGraph {
 public:
  struct Edge {
    VertexId src;
    VertexId dst;
    Weight weight;
  };

  CsrGraph() : row_offsets_{0} {}

  // Builds from an edge list; edges keep their relative input order within
  // each source row. Throws on out-of-range endpoints.
  static CsrGraph from_edges(std::size_t num_vertices, std::span<const Edge> edges);

  std::size_t num_vertices() const { return row_offsets_.size() - 1; }
  std::size_t num_edges() const { return col_indices_.size(); }

  std::span<const EdgeIndex> row_offsets() const { return row_offsets_; }
  std::span<const VertexId> col_indices() const { return col_indices_; }
  std::span<const Weight> weights() const { return weights_; }

  std::size_t out_degree(VertexId u) const {
    return row_offsets_[u + 1] - row_offsets_[u];
  }
  EdgeIndex edge_begin(VertexId u) const { return row_offsets_[u]; }
  EdgeIndex edge_end(VertexId u) const { return row_offsets_[u + 1]; }

  CsrGraph with_unit_weights() const;
  std::vector<Edge> edges() const;

  friend bool operator==(const CsrGraph&, const CsrGraph&) = default;

 private:
  std::vector<EdgeIndex> row_offsets_;
  std::vector<VertexId> col_indices_;
  std::vector<Weight> weights_;
};

enum class GraphFormat { kDimacs, kMatrixMarket };

GraphFormat parse_graph_format(std::string_view s);
// ".gr" -> DIMACS, ".mtx" -> Matrix Market.
GraphFormat format_from_path(const std::filesystem::path& p);

struct LoadOptions {
  // Real-valued Matrix Market entries are multiplied by this and rounded.
  double real_weight_scale = 1000.0;
};

CsrGraph load_graph(const std::filesystem::path& path, GraphFormat format,
                    const LoadOptions& opts = {});
CsrGraph parse_dimacs(std::istream& in);
CsrGraph parse_matrix_market(std::istream& in, const LoadOptions& opts = {});

void write_dimacs(const CsrGraph& g, std::ostream& out);
// Always emitted as `coordinate integer general`.
void write_matrix_market(const CsrGraph& g, std::ostream& out);
void save_graph(const CsrGraph& g, const std::filesystem::path& path, GraphFormat format);

enum class GeneratorKind { kGrid2d, kPath, kRmat, kRandomUniform };

struct GeneratorParams {
  // grid2d
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  bool diagonals = false;  // adds one diagonal per cell: a triangulated mesh
  // path / random_uniform
  std::uint32_t num_vertices = 0;
  std::uint64_t num_edges = 0;
  // rmat
  std::uint32_t scale = 0;
  std::uint32_t edge_factor = 8;
  double a = 0.57, b = 0.19, c = 0.19, d = 0.05;
  // edge weights, drawn uniformly from [min_weight, max_weight]
  Weight min_weight = 1;
  Weight max_weight = 1;
};

CsrGraph generate_graph(GeneratorKind kind, const GeneratorParams& params,
                        std::uint64_t seed);

// Parses "grid2d:RxC", "mesh:RxC", "path:N", "rmat:SCALE[:EDGE_FACTOR]" and
// "random:N:M". The weight range is applied separately.
struct GeneratorSpec {
  GeneratorKind kind;
  GeneratorParams params;
};
GeneratorSpec parse_generator_spec(std::string_view spec);

}  // namespace mlmq
