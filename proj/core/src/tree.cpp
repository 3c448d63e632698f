#include "steer/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "steer/canonical_json.hpp"
#include "steer/error.hpp"

namespace steer {

using nlohmann::json;

FeatureMatrix::FeatureMatrix(const Dataset& ds)
    : rows_(ds.size()), cols_(ds.n_features()), data_(rows_ * cols_) {
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto& values = ds.rows()[r].values;
    for (std::size_t c = 0; c < cols_; ++c) {
      data_[c * rows_ + r] = values[c] ? *values[c] : std::numeric_limits<double>::quiet_NaN();
    }
  }
}

std::vector<double> FeatureMatrix::row(std::size_t r) const {
  std::vector<double> out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = at(r, c);
  return out;
}

std::vector<double> to_dense(std::span<const Cell> values) {
  std::vector<double> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    out[j] = values[j] ? *values[j] : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error(ErrorCode::InvalidArtifact, "tree has no nodes");
}

void DecisionTree::validate(std::size_t n_features) const {
  for (const auto& node : nodes_) {
    if (node.is_leaf()) {
      const double total = node.proba[0] + node.proba[1];
      if (std::abs(total - 1.0) > 1e-9 || node.proba[0] < 0.0 || node.proba[1] < 0.0) {
        throw Error(ErrorCode::InvalidArtifact, "leaf distribution does not sum to 1");
      }
      continue;
    }
    if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= n_features) {
      throw Error(ErrorCode::InvalidArtifact, "node feature index out of range");
    }
    const auto n = static_cast<int>(nodes_.size());
    if (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n) {
      throw Error(ErrorCode::InvalidArtifact, "node child index out of range");
    }
  }
}

namespace {

json node_to_json(const std::vector<TreeNode>& nodes, int index) {
  const TreeNode& node = nodes[static_cast<std::size_t>(index)];
  if (node.is_leaf()) return {{"proba", {node.proba[0], node.proba[1]}}};
  return {{"feature", node.feature},
          {"threshold", node.threshold},
          {"missing_left", node.missing_left},
          {"left", node_to_json(nodes, node.left)},
          {"right", node_to_json(nodes, node.right)}};
}

int node_from_json(const json& doc, std::vector<TreeNode>& nodes) {
  const auto index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (doc.contains("proba")) {
    const auto& p = doc["proba"];
    if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::InvalidArtifact, "leaf needs two probabilities");
    nodes[static_cast<std::size_t>(index)].proba = {read_real(p[0]), read_real(p[1])};
    return index;
  }
  TreeNode node;
  node.feature = doc.at("feature").get<int>();
  node.threshold = read_real(doc.at("threshold"));
  node.missing_left = doc.at("missing_left").get<bool>();
  node.left = node_from_json(doc.at("left"), nodes);
  node.right = node_from_json(doc.at("right"), nodes);
  nodes[static_cast<std::size_t>(index)] = node;
  return index;
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  bool missing_left = true;
  double score = std::numeric_limits<double>::infinity();
};

/// Sum over children of n * gini(child); lower is better.
double weighted_gini(double n0, double n1) {
  const double n = n0 + n1;
  return n > 0.0 ? n - (n0 * n0 + n1 * n1) / n : 0.0;
}

class TreeGrower {
 public:
  TreeGrower(const FeatureMatrix& x, std::span<const int> labels, const GrowOptions& options,
             SplitMix64* rng)
      : x_(x), labels_(labels), options_(options), rng_(rng) {
    all_features_.resize(x.cols());
    std::iota(all_features_.begin(), all_features_.end(), 0);
    per_split_ = std::min(options.features_per_split == 0 ? x.cols() : options.features_per_split,
                          x.cols());
  }

  std::vector<TreeNode> run(std::vector<std::uint32_t> sample) {
    grow(std::move(sample), 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::vector<std::uint32_t> sample, int depth) {
    const auto index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    double c0 = 0.0, c1 = 0.0;
    for (auto r : sample) (labels_[r] == 0 ? c0 : c1) += 1.0;
    const double n = c0 + c1;
    nodes_[static_cast<std::size_t>(index)].proba = {c0 / n, c1 / n};

    const bool pure = c0 == 0.0 || c1 == 0.0;
    if (pure || depth >= options_.max_depth || n < 2.0 * options_.min_leaf) return index;

    const SplitChoice split = best_split(sample, weighted_gini(c0, c1));
    if (split.feature < 0) return index;

    std::vector<std::uint32_t> left, right;
    const auto column = x_.column(static_cast<std::size_t>(split.feature));
    for (auto r : sample) {
      const double v = column[r];
      const bool go_left = std::isnan(v) ? split.missing_left : v <= split.threshold;
      (go_left ? left : right).push_back(r);
    }
    sample.clear();
    sample.shrink_to_fit();

    const int left_index = grow(std::move(left), depth + 1);
    const int right_index = grow(std::move(right), depth + 1);
    TreeNode& node = nodes_[static_cast<std::size_t>(index)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.missing_left = split.missing_left;
    node.left = left_index;
    node.right = right_index;
    node.proba = {0.0, 0.0};
    return index;
  }

  std::vector<std::size_t> candidate_features() {
    if (per_split_ >= x_.cols() || rng_ == nullptr) return all_features_;
    return sample_without_replacement(x_.cols(), per_split_, *rng_);
  }

  SplitChoice best_split(const std::vector<std::uint32_t>& sample, double parent_score) {
    SplitChoice best;
    const double min_leaf = options_.min_leaf;
    std::vector<std::pair<double, int>> values;
    values.reserve(sample.size());

    for (const auto j : candidate_features()) {
      const auto column = x_.column(j);
      values.clear();
      double m0 = 0.0, m1 = 0.0;
      double t0 = 0.0, t1 = 0.0;
      for (auto r : sample) {
        const double v = column[r];
        const int y = labels_[r];
        if (std::isnan(v)) {
          (y == 0 ? m0 : m1) += 1.0;
        } else {
          values.emplace_back(v, y);
          (y == 0 ? t0 : t1) += 1.0;
        }
      }
      if (values.size() < 2) continue;
      std::sort(values.begin(), values.end());

      double l0 = 0.0, l1 = 0.0;
      for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        (values[i].second == 0 ? l0 : l1) += 1.0;
        const double here = values[i].first;
        const double next = values[i + 1].first;
        if (here == next) continue;

        const double r0 = t0 - l0, r1 = t1 - l1;
        const bool missing_left = (l0 + l1) >= (r0 + r1);
        const double a0 = l0 + (missing_left ? m0 : 0.0), a1 = l1 + (missing_left ? m1 : 0.0);
        const double b0 = r0 + (missing_left ? 0.0 : m0), b1 = r1 + (missing_left ? 0.0 : m1);
        if (a0 + a1 < min_leaf || b0 + b1 < min_leaf) continue;

        const double score = weighted_gini(a0, a1) + weighted_gini(b0, b1);
        if (score < best.score && score < parent_score - 1e-12) {
          double threshold = here + (next - here) / 2.0;
          if (!(threshold < next)) threshold = here;
          best = {static_cast<int>(j), threshold, missing_left, score};
        }
      }
    }
    return best;
  }

  const FeatureMatrix& x_;
  std::span<const int> labels_;
  GrowOptions options_;
  SplitMix64* rng_;
  std::vector<std::size_t> all_features_;
  std::size_t per_split_ = 0;
  std::vector<TreeNode> nodes_;
};

}  // namespace

json DecisionTree::to_json() const { return node_to_json(nodes_, 0); }

DecisionTree DecisionTree::from_json(const json& doc) {
  std::vector<TreeNode> nodes;
  try {
    node_from_json(doc, nodes);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArtifact, std::string("malformed tree: ") + e.what());
  }
  return DecisionTree(std::move(nodes));
}

DecisionTree grow_tree(const FeatureMatrix& x, std::span<const int> labels,
                       std::vector<std::uint32_t> sample, const GrowOptions& options,
                       SplitMix64* rng) {
  if (sample.empty()) throw Error(ErrorCode::EmptyDataset, "cannot grow a tree on zero rows");
  TreeGrower grower(x, labels, options, rng);
  return DecisionTree(grower.run(std::move(sample)));
}

}  // namespace steer
