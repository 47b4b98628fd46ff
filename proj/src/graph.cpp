#include "mlmq/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "mlmq/error.hpp"

namespace mlmq {

CsrGraph CsrGraph::from_edges(std::size_t num_vertices, std::span<const Edge> edges) {
  if (num_vertices > std::numeric_limits<VertexId>::max())
    throw Error(ErrorKind::kInvalidParameter, "too many vertices");
  CsrGraph g;
  g.row_offsets_.assign(num_vertices + 1, 0);
  std::size_t kept = 0;
  for (const Edge& e : edges) {
    if (e.src >= num_vertices || e.dst >= num_vertices)
      throw Error(ErrorKind::kVertexOutOfRange,
                  "edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                      ") outside vertex range " + std::to_string(num_vertices));
    if (e.src == e.dst && e.weight == 0) continue;
    ++g.row_offsets_[e.src + 1];
    ++kept;
  }
  for (std::size_t v = 0; v < num_vertices; ++v)
    g.row_offsets_[v + 1] += g.row_offsets_[v];
  g.col_indices_.resize(kept);
  g.weights_.resize(kept);
  std::vector<EdgeIndex> cursor(g.row_offsets_.begin(), g.row_offsets_.end() - 1);
  for (const Edge& e : edges) {
    if (e.src == e.dst && e.weight == 0) continue;
    const EdgeIndex at = cursor[e.src]++;
    g.col_indices_[at] = e.dst;
    g.weights_[at] = e.weight;
  }
  return g;
}

CsrGraph CsrGraph::with_unit_weights() const {
  CsrGraph g = *this;
  std::fill(g.weights_.begin(), g.weights_.end(), Weight{1});
  return g;
}

std::vector<CsrGraph::Edge> CsrGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (VertexId u = 0; u < num_vertices(); ++u)
    for (EdgeIndex e = edge_begin(u); e < edge_end(u); ++e)
      out.push_back({u, col_indices_[e], weights_[e]});
  return out;
}

GraphFormat parse_graph_format(std::string_view s) {
  if (s == "dimacs" || s == "dimacs_gr" || s == "gr") return GraphFormat::kDimacs;
  if (s == "mtx" || s == "matrix_market" || s == "mm") return GraphFormat::kMatrixMarket;
  throw Error(ErrorKind::kInvalidParameter, "unknown graph format '" + std::string(s) + "'");
}

GraphFormat format_from_path(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".mtx") return GraphFormat::kMatrixMarket;
  return GraphFormat::kDimacs;
}

namespace {

class LineTokens {
 public:
  explicit LineTokens(std::string_view line) : rest_(line) {}

  bool next(std::string_view& tok) {
    const auto b = rest_.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return false;
    rest_.remove_prefix(b);
    const auto e = rest_.find_first_of(" \t\r");
    tok = rest_.substr(0, e);
    rest_.remove_prefix(e == std::string_view::npos ? rest_.size() : e);
    return true;
  }

 private:
  std::string_view rest_;
};

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": " + what);
}

template <typename T>
T parse_number(std::string_view tok, std::size_t line_no, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    parse_fail(line_no, std::string("malformed ") + what + " '" + std::string(tok) + "'");
  return value;
}

double parse_real(std::string_view tok, std::size_t line_no) {
  // from_chars for double is incomplete in some standard libraries.
  std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    parse_fail(line_no, "malformed value '" + s + "'");
  return v;
}

VertexId to_vertex(std::int64_t one_based, std::size_t n, std::size_t line_no) {
  if (one_based < 1 || static_cast<std::uint64_t>(one_based) > n)
    throw Error(ErrorKind::kVertexOutOfRange,
                "line " + std::to_string(line_no) + ": vertex " +
                    std::to_string(one_based) + " outside 1.." + std::to_string(n));
  return static_cast<VertexId>(one_based - 1);
}

Weight checked_weight(std::int64_t w, std::size_t line_no) {
  if (w < 0)
    throw Error(ErrorKind::kNegativeWeight,
                "line " + std::to_string(line_no) + ": negative weight " + std::to_string(w));
  if (w > std::numeric_limits<Weight>::max())
    parse_fail(line_no, "weight " + std::to_string(w) + " exceeds 32 bits");
  return static_cast<Weight>(w);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

CsrGraph parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t n = 0;
  std::uint64_t declared_m = 0;
  std::vector<CsrGraph::Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    LineTokens toks(line);
    std::string_view tag;
    if (!toks.next(tag) || tag == "c") continue;
    if (tag == "p") {
      std::string_view kind, ns, ms, extra;
      if (have_header) parse_fail(line_no, "duplicate problem line");
      if (!toks.next(kind) || !toks.next(ns) || !toks.next(ms) || toks.next(extra))
        parse_fail(line_no, "expected 'p sp <n> <m>'");
      if (kind != "sp") parse_fail(line_no, "unsupported problem type '" + std::string(kind) + "'");
      n = parse_number<std::uint64_t>(ns, line_no, "vertex count");
      declared_m = parse_number<std::uint64_t>(ms, line_no, "arc count");
      have_header = true;
      edges.reserve(declared_m);
    } else if (tag == "a") {
      if (!have_header) parse_fail(line_no, "arc before problem line");
      std::string_view us, vs, ws, extra;
      if (!toks.next(us) || !toks.next(vs) || !toks.next(ws) || toks.next(extra))
        parse_fail(line_no, "expected 'a <u> <v> <w>'");
      const auto u = parse_number<std::int64_t>(us, line_no, "vertex id");
      const auto v = parse_number<std::int64_t>(vs, line_no, "vertex id");
      const auto w = parse_number<std::int64_t>(ws, line_no, "weight");
      edges.push_back({to_vertex(u, n, line_no), to_vertex(v, n, line_no),
                       checked_weight(w, line_no)});
    } else {
      parse_fail(line_no, "unexpected line tag '" + std::string(tag) + "'");
    }
  }
  if (!have_header) throw Error(ErrorKind::kParse, "missing problem line");
  if (edges.size() != declared_m)
    throw Error(ErrorKind::kParse, "header declares " + std::to_string(declared_m) +
                                       " arcs but " + std::to_string(edges.size()) +
                                       " were listed");
  return CsrGraph::from_edges(n, edges);
}

CsrGraph parse_matrix_market(std::istream& in, const LoadOptions& opts) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorKind::kParse, "empty Matrix Market file");
  ++line_no;
  LineTokens header(line);
  std::string_view banner, object, layout, field_tok, symmetry_tok;
  if (!header.next(banner) || banner != "%%MatrixMarket" || !header.next(object) ||
      !header.next(layout) || !header.next(field_tok) || !header.next(symmetry_tok))
    parse_fail(line_no, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
  if (lower(object) != "matrix" || lower(layout) != "coordinate")
    parse_fail(line_no, "only 'matrix coordinate' is supported");
  const std::string field = lower(field_tok);
  const std::string symmetry = lower(symmetry_tok);
  if (field != "real" && field != "integer" && field != "pattern" && field != "double")
    parse_fail(line_no, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    parse_fail(line_no, "unsupported symmetry '" + symmetry + "'");
  const bool pattern = field == "pattern";
  const bool integer = field == "integer";
  const bool symmetric = symmetry == "symmetric";

  std::size_t rows = 0, cols = 0;
  std::uint64_t nnz = 0;
  bool have_size = false;
  std::uint64_t seen = 0;
  std::vector<CsrGraph::Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    LineTokens toks(line);
    std::string_view first;
    if (!toks.next(first) || first.front() == '%') continue;
    if (!have_size) {
      std::string_view cs, ns, extra;
      if (!toks.next(cs) || !toks.next(ns) || toks.next(extra))
        parse_fail(line_no, "expected '<rows> <cols> <entries>'");
      rows = parse_number<std::uint64_t>(first, line_no, "row count");
      cols = parse_number<std::uint64_t>(cs, line_no, "column count");
      nnz = parse_number<std::uint64_t>(ns, line_no, "entry count");
      if (rows != cols) parse_fail(line_no, "adjacency matrix must be square");
      have_size = true;
      edges.reserve(symmetric ? 2 * nnz : nnz);
      continue;
    }
    std::string_view js, vs, extra;
    if (!toks.next(js)) parse_fail(line_no, "expected '<row> <col> [value]'");
    const bool has_value = toks.next(vs);
    if (pattern == has_value || toks.next(extra))
      parse_fail(line_no, pattern ? "pattern entries carry no value" : "missing entry value");
    const VertexId i = to_vertex(parse_number<std::int64_t>(first, line_no, "row"), rows, line_no);
    const VertexId j = to_vertex(parse_number<std::int64_t>(js, line_no, "column"), rows, line_no);
    Weight w = 1;
    if (integer) {
      w = checked_weight(parse_number<std::int64_t>(vs, line_no, "value"), line_no);
    } else if (!pattern) {
      const double v = parse_real(vs, line_no);
      if (v < 0)
        throw Error(ErrorKind::kNegativeWeight,
                    "line " + std::to_string(line_no) + ": negative weight " + std::string(vs));
      const double scaled = std::round(v * opts.real_weight_scale);
      if (!(scaled <= static_cast<double>(std::numeric_limits<Weight>::max())))
        parse_fail(line_no, "scaled weight exceeds 32 bits");
      w = static_cast<Weight>(scaled);
    }
    edges.push_back({i, j, w});
    if (symmetric && i != j) edges.push_back({j, i, w});
    ++seen;
  }
  if (!have_size) throw Error(ErrorKind::kParse, "missing size line");
  if (seen != nnz)
    throw Error(ErrorKind::kParse, "size line declares " + std::to_string(nnz) +
                                       " entries but " + std::to_string(seen) + " were listed");
  return CsrGraph::from_edges(rows, edges);
}

CsrGraph load_graph(const std::filesystem::path& path, GraphFormat format,
                    const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  return format == GraphFormat::kDimacs ? parse_dimacs(in) : parse_matrix_market(in, opts);
}

void write_dimacs(const CsrGraph& g, std::ostream& out) {
  out << "c generated by mlmq\n";
  out << "p sp " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  const auto cols = g.col_indices();
  const auto w = g.weights();
  for (VertexId u = 0; u < g.num_vertices(); ++u)
    for (EdgeIndex e = g.edge_begin(u); e < g.edge_end(u); ++e)
      out << "a " << u + 1 << ' ' << cols[e] + 1 << ' ' << w[e] << '\n';
}

void write_matrix_market(const CsrGraph& g, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate integer general\n";
  out << g.num_vertices() << ' ' << g.num_vertices() << ' ' << g.num_edges() << '\n';
  const auto cols = g.col_indices();
  const auto w = g.weights();
  for (VertexId u = 0; u < g.num_vertices(); ++u)
    for (EdgeIndex e = g.edge_begin(u); e < g.edge_end(u); ++e)
      out << u + 1 << ' ' << cols[e] + 1 << ' ' << w[e] << '\n';
}

void save_graph(const CsrGraph& g, const std::filesystem::path& path, GraphFormat format) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  if (format == GraphFormat::kDimacs) write_dimacs(g, out);
  else write_matrix_market(g, out);
}

namespace {

void add_undirected(std::vector<CsrGraph::Edge>& edges, VertexId u, VertexId v, Weight w) {
  edges.push_back({u, v, w});
  edges.push_back({v, u, w});
}

void invalid(const std::string& what) { throw Error(ErrorKind::kInvalidParameter, what); }

}  // namespace

CsrGraph generate_graph(GeneratorKind kind, const GeneratorParams& p, std::uint64_t seed) {
  if (p.min_weight > p.max_weight) invalid("min_weight exceeds max_weight");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Weight> weight(p.min_weight, p.max_weight);
  std::vector<CsrGraph::Edge> edges;
  std::size_t n = 0;

  switch (kind) {
    case GeneratorKind::kGrid2d: {
      if (p.rows == 0 || p.cols == 0) invalid("grid2d needs positive rows and cols");
      n = static_cast<std::size_t>(p.rows) * p.cols;
      auto id = [&](std::uint32_t r, std::uint32_t c) { return static_cast<VertexId>(r * p.cols + c); };
      for (std::uint32_t r = 0; r < p.rows; ++r) {
        for (std::uint32_t c = 0; c < p.cols; ++c) {
          if (c + 1 < p.cols) add_undirected(edges, id(r, c), id(r, c + 1), weight(rng));
          if (r + 1 < p.rows) add_undirected(edges, id(r, c), id(r + 1, c), weight(rng));
          if (p.diagonals && r + 1 < p.rows && c + 1 < p.cols)
            add_undirected(edges, id(r, c), id(r + 1, c + 1), weight(rng));
        }
      }
      break;
    }
    case GeneratorKind::kPath: {
      if (p.num_vertices == 0) invalid("path needs a positive vertex count");
      n = p.num_vertices;
      for (VertexId v = 0; v + 1 < n; ++v) add_undirected(edges, v, v + 1, weight(rng));
      break;
    }
    case GeneratorKind::kRmat: {
      if (p.scale == 0 || p.scale > 30) invalid("rmat scale must be in 1..30");
      if (p.edge_factor == 0) invalid("rmat edge_factor must be positive");
      if (p.a < 0 || p.b < 0 || p.c < 0 || p.d < 0 ||
          std::abs(p.a + p.b + p.c + p.d - 1.0) > 1e-9)
        invalid("rmat probabilities must be non-negative and sum to 1");
      n = std::size_t{1} << p.scale;
      const std::uint64_t m = static_cast<std::uint64_t>(p.edge_factor) * n;
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      edges.reserve(m);
      for (std::uint64_t k = 0; k < m; ++k) {
        VertexId u = 0, v = 0;
        for (std::uint32_t bit = 0; bit < p.scale; ++bit) {
          const double x = coin(rng);
          const VertexId ub = x >= p.a + p.b ? 1 : 0;
          const VertexId vb = (x >= p.a && x < p.a + p.b) || x >= p.a + p.b + p.c ? 1 : 0;
          u = (u << 1) | ub;
          v = (v << 1) | vb;
        }
        edges.push_back({u, v, weight(rng)});
      }
      break;
    }
    case GeneratorKind::kRandomUniform: {
      if (p.num_vertices == 0) invalid("random_uniform needs a positive vertex count");
      n = p.num_vertices;
      std::uniform_int_distribution<VertexId> vertex(0, static_cast<VertexId>(n - 1));
      edges.reserve(p.num_edges);
      for (std::uint64_t k = 0; k < p.num_edges; ++k) {
        const VertexId u = vertex(rng);
        const VertexId v = vertex(rng);
        edges.push_back({u, v, weight(rng)});
      }
      break;
    }
  }
  return CsrGraph::from_edges(n, edges);
}

GeneratorSpec parse_generator_spec(std::string_view spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  auto num = [&](const std::string& s) -> std::uint64_t {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      invalid("bad number '" + s + "' in generator spec '" + std::string(spec) + "'");
    return v;
  };
  GeneratorSpec out{};
  const std::string& kind = parts[0];
  if (kind == "grid2d" || kind == "mesh") {
    if (parts.size() != 2) invalid("expected grid2d:RxC");
    const auto x = parts[1].find('x');
    if (x == std::string::npos) invalid("expected grid2d:RxC");
    out.kind = GeneratorKind::kGrid2d;
    out.params.rows = static_cast<std::uint32_t>(num(parts[1].substr(0, x)));
    out.params.cols = static_cast<std::uint32_t>(num(parts[1].substr(x + 1)));
    out.params.diagonals = kind == "mesh";
  } else if (kind == "path") {
    if (parts.size() != 2) invalid("expected path:N");
    out.kind = GeneratorKind::kPath;
    out.params.num_vertices = static_cast<std::uint32_t>(num(parts[1]));
  } else if (kind == "rmat") {
    if (parts.size() < 2 || parts.size() > 3) invalid("expected rmat:SCALE[:EDGE_FACTOR]");
    out.kind = GeneratorKind::kRmat;
    out.params.scale = static_cast<std::uint32_t>(num(parts[1]));
    if (parts.size() == 3) out.params.edge_factor = static_cast<std::uint32_t>(num(parts[2]));
  } else if (kind == "random") {
    if (parts.size() != 3) invalid("expected random:N:M");
    out.kind = GeneratorKind::kRandomUniform;
    out.params.num_vertices = static_cast<std::uint32_t>(num(parts[1]));
    out.params.num_edges = num(parts[2]);
  } else {
    invalid("unknown generator '" + kind + "'");
  }
  return out;
}

}  // namespace mlmq
