#include "mlmq/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mlmq/error.hpp"

namespace mlmq {

namespace {

class TreeBuilder {
 public:
  TreeBuilder(std::span<const double> x, std::size_t dim, std::span<const double> y,
              const ForestParams& p, std::mt19937_64& rng)
      : x_(x), dim_(dim), y_(y), p_(p), rng_(rng) {
    mtry_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(p.feature_fraction * dim)));
    mtry_ = std::min(mtry_, dim);
  }

  RegressionForest::Tree build(std::vector<std::size_t> rows) {
    tree_.clear();
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  double at(std::size_t row, std::size_t col) const { return x_[row * dim_ + col]; }

  std::int32_t grow(std::vector<std::size_t>& rows, std::uint32_t depth) {
    const auto id = static_cast<std::int32_t>(tree_.size());
    tree_.emplace_back();
    double sum = 0.0;
    for (std::size_t r : rows) sum += y_[r];
    tree_[id].value = sum / static_cast<double>(rows.size());
    if (depth >= p_.max_depth || rows.size() < 2 * std::size_t(p_.min_leaf)) return id;

    std::vector<std::size_t> cols(dim_);
    std::iota(cols.begin(), cols.end(), 0);
    // Partial Fisher-Yates: the first mtry_ entries are the sampled columns.
    for (std::size_t i = 0; i < mtry_; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, dim_ - 1);
      std::swap(cols[i], cols[pick(rng_)]);
    }

    const double n = static_cast<double>(rows.size());
    double sum_sq = 0.0;
    for (std::size_t r : rows) sum_sq += y_[r] * y_[r];
    const double parent_sse = sum_sq - sum * sum / n;

    double best_gain = 1e-12;
    std::int32_t best_col = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> order(rows);
    for (std::size_t ci = 0; ci < mtry_; ++ci) {
      const std::size_t c = cols[ci];
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return at(a, c) < at(b, c) || (at(a, c) == at(b, c) && a < b);
      });
      double ls = 0.0, lsq = 0.0;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const double v = y_[order[i]];
        ls += v;
        lsq += v * v;
        const std::size_t nl = i + 1;
        const std::size_t nr = order.size() - nl;
        if (nl < p_.min_leaf || nr < p_.min_leaf) continue;
        const double xa = at(order[i], c);
        const double xb = at(order[i + 1], c);
        if (xa == xb) continue;
        const double rs = sum - ls, rsq = sum_sq - lsq;
        const double sse = (lsq - ls * ls / double(nl)) + (rsq - rs * rs / double(nr));
        const double gain = parent_sse - sse;
        if (gain > best_gain) {
          best_gain = gain;
          best_col = static_cast<std::int32_t>(c);
          best_threshold = xa + (xb - xa) / 2.0;
        }
      }
    }
    if (best_col < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows)
      (at(r, std::size_t(best_col)) <= best_threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    tree_[id].feature = best_col;
    tree_[id].threshold = best_threshold;
    const std::int32_t l = grow(left, depth + 1);
    const std::int32_t r = grow(right, depth + 1);
    tree_[id].left = l;
    tree_[id].right = r;
    return id;
  }

  std::span<const double> x_;
  std::size_t dim_;
  std::span<const double> y_;
  const ForestParams& p_;
  std::mt19937_64& rng_;
  std::size_t mtry_;
  RegressionForest::Tree tree_;
};

}  // namespace

void RegressionForest::fit(std::span<const double> x, std::size_t dim, std::span<const double> y,
                           const ForestParams& params) {
  if (dim == 0 || y.empty() || x.size() != y.size() * dim)
    throw Error(ErrorKind::kInsufficientData, "forest needs a non-empty, rectangular sample");
  if (params.trees == 0 || params.min_leaf == 0)
    throw Error(ErrorKind::kInvalidParameter, "forest needs trees >= 1 and min_leaf >= 1");
  dim_ = dim;
  trees_.clear();
  std::mt19937_64 rng(params.seed);
  TreeBuilder builder(x, dim, y, params, rng);
  const std::size_t n = y.size();
  std::uniform_int_distribution<std::size_t> draw(0, n - 1);
  for (std::uint32_t t = 0; t < params.trees; ++t) {
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = draw(rng);
    trees_.push_back(builder.build(std::move(rows)));
  }
}

double RegressionForest::predict(std::span<const double> row) const {
  if (trees_.empty()) return 0.0;
  double sum = 0.0;
  for (const Tree& t : trees_) {
    std::int32_t i = 0;
    while (t[i].feature >= 0) i = row[t[i].feature] <= t[i].threshold ? t[i].left : t[i].right;
    sum += t[i].value;
  }
  return sum / static_cast<double>(trees_.size());
}

}  // namespace mlmq
