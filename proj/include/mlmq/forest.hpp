#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace mlmq {

struct ForestParams {
  std::uint32_t trees = 64;
  std::uint32_t max_depth = 12;
  std::uint32_t min_leaf = 2;
  std::uint64_t seed = 1;
  // Fraction of input columns tried at each split; at least one.
  double feature_fraction = 1.0 / 3.0;
};

// Bagged regression trees with variance-reduction splits. Each tree is grown
// on a bootstrap sample; the forest predicts the mean of its trees.
class RegressionForest {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
  };
  using Tree = std::vector<Node>;

  // `x` is row-major with `dim` columns.
  void fit(std::span<const double> x, std::size_t dim, std::span<const double> y,
           const ForestParams& params);
  double predict(std::span<const double> row) const;

  std::size_t dim() const { return dim_; }
  const std::vector<Tree>& trees() const { return trees_; }
  void set(std::size_t dim, std::vector<Tree> trees) {
    dim_ = dim;
    trees_ = std::move(trees);
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Tree> trees_;
};

}  // namespace mlmq
