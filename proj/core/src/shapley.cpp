#include "steer/shapley.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "steer/random.hpp"

namespace steer {

using nlohmann::json;

namespace {

// Coalition sets as bitsets over the 2^n subsets, routed through each tree
// together: at a node where x and the background row part ways, subsets
// holding the split feature follow x and the rest follow the background.
// Every subset meets exactly one leaf per tree, and trees are added in
// model order, so value[s] is bit-identical to scoring each hybrid row.
class CoalitionRouter {
 public:
  CoalitionRouter(std::size_t n_features, std::size_t coalitions)
      : words_(std::max<std::size_t>(1, coalitions / 64)),
        with_feature_(n_features, std::vector<std::uint64_t>(words_, 0)),
        scratch_(2 * (kMaxDepth + 1), std::vector<std::uint64_t>(words_, 0)) {
    for (std::size_t s = 0; s < coalitions; ++s) {
      for (std::size_t j = 0; j < n_features; ++j) {
        if ((s >> j) & 1U) with_feature_[j][s / 64] |= std::uint64_t{1} << (s % 64);
      }
    }
    full_.assign(words_, 0);
    for (std::size_t s = 0; s < coalitions; ++s) full_[s / 64] |= std::uint64_t{1} << (s % 64);
  }

  /// acc[s] += positive-class leaf probability of each tree for hybrid s.
  void accumulate(const DecisionTree& tree, const double* x, const double* b, std::vector<double>& acc) {
    x_ = x;
    b_ = b;
    acc_ = &acc;
    nodes_ = &tree.nodes();
    walk(0, full_.data(), 0);
  }

 private:
  static constexpr std::size_t kMaxDepth = 64;

  static bool goes_left(const TreeNode& node, double v) noexcept {
    return std::isnan(v) ? node.missing_left : v <= node.threshold;
  }

  void walk(int index, const std::uint64_t* mask, std::size_t depth) {
    const TreeNode& node = (*nodes_)[static_cast<std::size_t>(index)];
    if (node.is_leaf()) {
      const double p = node.proba[1];
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t bits = mask[w];
        while (bits != 0) {
          const auto s = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
          (*acc_)[s] += p;
          bits &= bits - 1;
        }
      }
      return;
    }
    const auto j = static_cast<std::size_t>(node.feature);
    const bool x_left = goes_left(node, x_[j]);
    const bool b_left = goes_left(node, b_[j]);
    if (x_left == b_left) {
      walk(x_left ? node.left : node.right, mask, depth);
      return;
    }
    if (2 * depth + 1 >= scratch_.size()) scratch_.resize(2 * depth + 2, std::vector<std::uint64_t>(words_, 0));
    std::uint64_t* with = scratch_[2 * depth].data();
    std::uint64_t* without = scratch_[2 * depth + 1].data();
    bool any_with = false, any_without = false;
    const auto& feature_bits = with_feature_[j];
    for (std::size_t w = 0; w < words_; ++w) {
      with[w] = mask[w] & feature_bits[w];
      without[w] = mask[w] & ~feature_bits[w];
      any_with |= with[w] != 0;
      any_without |= without[w] != 0;
    }
    if (any_with) walk(x_left ? node.left : node.right, with, depth + 1);
    if (any_without) walk(b_left ? node.left : node.right, without, depth + 1);
  }

  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> with_feature_;
  std::vector<std::vector<std::uint64_t>> scratch_;
  std::vector<std::uint64_t> full_;
  const double* x_ = nullptr;
  const double* b_ = nullptr;
  std::vector<double>* acc_ = nullptr;
  const std::vector<TreeNode>* nodes_ = nullptr;
};

}  // namespace

ShapExplanation shap_exact_dense(const ModelArtifact& model, std::span<const double> x,
                                 std::span<const std::vector<double>> background) {
  if (x.size() != model.feature_names.size()) {
    throw Error(ErrorCode::DimensionMismatch, "instance length differs from model features");
  }
  for (const auto& b : background) {
    if (b.size() != x.size()) {
      throw Error(ErrorCode::DimensionMismatch, "background row length differs from model features");
    }
  }
  const std::size_t n = x.size();
  if (n > kMaxExactShapFeatures) {
    throw Error(ErrorCode::TooManyFeatures, "exact Shapley enumeration supports at most 12 features",
                {{"features", n}});
  }
  if (background.empty()) throw Error(ErrorCode::EmptyBackground, "background set is empty");
  if (model.trees.empty()) throw Error(ErrorCode::InvalidArtifact, "model has no trees");

  const std::size_t coalitions = std::size_t{1} << n;
  CoalitionRouter router(n, coalitions);
  const auto n_trees = static_cast<double>(model.trees.size());
  std::vector<double> value(coalitions, 0.0);
  std::vector<double> acc(coalitions);
  for (const auto& b : background) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (const auto& tree : model.trees) router.accumulate(tree, x.data(), b.data(), acc);
    for (std::size_t s = 0; s < coalitions; ++s) value[s] += acc[s] / n_trees;
  }
  for (auto& v : value) v /= static_cast<double>(background.size());
  return detail::shapley_from_values(value, n, model.proba(x.data())[1]);
}

ShapExplanation shap_exact(const ModelArtifact& model, std::span<const Cell> x,
                           std::span<const std::vector<Cell>> background) {
  std::vector<std::vector<double>> dense;
  dense.reserve(background.size());
  for (const auto& b : background) dense.push_back(to_dense(b));
  const auto xd = to_dense(x);
  return shap_exact_dense(model, xd, dense);
}

json GlobalImportance::to_json() const {
  json list = json::array();
  for (const auto& f : features) {
    list.push_back({{"feature", f.feature},
                    {"display_label", f.display_label},
                    {"mean_abs_phi", f.mean_abs_phi},
                    {"mean_signed_phi", f.mean_signed_phi},
                    {"actionable", f.actionable},
                    {"rank", f.rank}});
  }
  return {{"features", std::move(list)},
          {"explained_rows", explained_rows},
          {"background_rows", background_rows},
          {"mean_base_value", mean_base_value}};
}

GlobalImportance global_importance(const ModelArtifact& model, const Dataset& ds,
                                   std::size_t sample_size, std::uint64_t seed,
                                   std::size_t background_size) {
  if (sample_size < 1) throw Error(ErrorCode::InvalidRequest, "sample_size must be >= 1");
  if (ds.feature_names() != model.feature_names) {
    throw Error(ErrorCode::SchemaMismatch, "dataset features differ from model features");
  }
  if (ds.size() == 0) throw Error(ErrorCode::EmptyDataset, "cannot explain an empty dataset");

  auto sample_rng = SplitMix64::derive(seed, Stream::ExplainSample);
  auto explained = sample_without_replacement(ds.size(), sample_size, sample_rng);
  std::sort(explained.begin(), explained.end());

  auto background_rng = SplitMix64::derive(seed, Stream::ExplainBackground);
  auto background_rows = sample_without_replacement(ds.size(), background_size, background_rng);
  std::sort(background_rows.begin(), background_rows.end());

  std::vector<std::vector<double>> background;
  background.reserve(background_rows.size());
  for (auto r : background_rows) background.push_back(to_dense(ds.rows()[r].values));

  const std::size_t n = ds.n_features();
  std::vector<double> abs_sum(n, 0.0), signed_sum(n, 0.0);
  double base_sum = 0.0;
  for (auto r : explained) {
    const auto x = to_dense(ds.rows()[r].values);
    const auto e = shap_exact_dense(model, x, background);
    for (std::size_t j = 0; j < n; ++j) {
      abs_sum[j] += std::abs(e.phi[j]);
      signed_sum[j] += e.phi[j];
    }
    base_sum += e.base_value;
  }

  const auto count = static_cast<double>(explained.size());
  GlobalImportance out;
  out.explained_rows = explained.size();
  out.background_rows = background.size();
  out.mean_base_value = base_sum / count;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& spec = ds.schema()[j];
    out.features.push_back({spec.name, spec.display_label, abs_sum[j] / count, signed_sum[j] / count,
                            spec.actionable, 0});
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.features[a].mean_abs_phi > out.features[b].mean_abs_phi;
  });
  std::vector<FeatureImportance> ranked;
  ranked.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ranked.push_back(out.features[order[k]]);
    ranked.back().rank = static_cast<int>(k + 1);
  }
  out.features = std::move(ranked);
  return out;
}

}  // namespace steer
