#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "steer/dataset.hpp"
#include "steer/random.hpp"

namespace steer {

using ClassProbabilities = std::array<double, 2>;

/// Column-major feature matrix with NaN marking missing cells.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(const Dataset& ds);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t row, std::size_t col) const noexcept { return data_[col * rows_ + row]; }
  std::span<const double> column(std::size_t col) const noexcept {
    return {data_.data() + col * rows_, rows_};
  }
  /// Row-major copy of one row, for prediction.
  std::vector<double> row(std::size_t r) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// NaN-coded copy of an instance's values.
std::vector<double> to_dense(std::span<const Cell> values);

struct TreeNode {
  static constexpr int kLeaf = -1;

  int feature = kLeaf;
  double threshold = 0.0;
  bool missing_left = true;
  int left = -1;
  int right = -1;
  ClassProbabilities proba{0.0, 0.0};

  bool is_leaf() const noexcept { return feature == kLeaf; }
  bool operator==(const TreeNode&) const = default;
};

/// Binary classification tree stored as a flat pre-order node array; node 0
/// is the root. A non-missing value goes left iff value <= threshold.
class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

  /// Index of the leaf reached by `x` (NaN = missing).
  int leaf_index(const double* x) const noexcept {
    int n = 0;
    while (!nodes_[static_cast<std::size_t>(n)].is_leaf()) {
      const TreeNode& node = nodes_[static_cast<std::size_t>(n)];
      const double v = x[node.feature];
      const bool go_left = std::isnan(v) ? node.missing_left : v <= node.threshold;
      n = go_left ? node.left : node.right;
    }
    return n;
  }

  const ClassProbabilities& predict(const double* x) const noexcept {
    return nodes_[static_cast<std::size_t>(leaf_index(x))].proba;
  }

  /// Throws InvalidArtifact unless every feature index is < n_features and
  /// every leaf distribution sums to 1 within 1e-9.
  void validate(std::size_t n_features) const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& doc);

  bool operator==(const DecisionTree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
};

struct GrowOptions {
  int max_depth = 6;
  int min_leaf = 5;
  /// Candidate features drawn per split; >= matrix columns means all.
  std::size_t features_per_split = 0;
};

/// CART with Gini impurity. `sample` lists training row indices, repeated
/// rows counting with multiplicity (bootstrap). Missing cells follow the
/// side that receives more non-missing rows (left on ties), and the split
/// search scores impurity with that routing applied. `rng` is only
/// consulted when features_per_split is below the column count.
DecisionTree grow_tree(const FeatureMatrix& x, std::span<const int> labels,
                       std::vector<std::uint32_t> sample, const GrowOptions& options,
                       SplitMix64* rng);

}  // namespace steer
