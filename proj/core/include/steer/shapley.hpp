#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steer/dataset.hpp"
#include "steer/error.hpp"
#include "steer/forest.hpp"

namespace steer {

/// Exact enumeration visits 2^n coalitions; beyond this it stops being cheap.
inline constexpr std::size_t kMaxExactShapFeatures = 12;
inline constexpr std::size_t kDefaultBackgroundRows = 100;

struct ShapExplanation {
  std::vector<double> phi;
  /// v(empty set): mean positive-class probability over the background.
  double base_value = 0.0;
  /// v(all features): the model's positive-class probability at x.
  double fx = 0.0;
};

namespace detail {

/// Shapley values from the 2^n coalition values v(S), S as a bitmask, and
/// the model output at the explained instance.
inline ShapExplanation shapley_from_values(const std::vector<double>& value, std::size_t n, double fx) {
  const std::size_t coalitions = value.size();
  // weight[k] = k! (n-k-1)! / n!
  std::vector<double> weight(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double w = 1.0 / static_cast<double>(n);
    // k!(n-1-k)!/(n-1)! = 1 / C(n-1, k)
    double binom = 1.0;
    for (std::size_t t = 1; t <= k; ++t) {
      binom = binom * static_cast<double>(n - 1 - k + t) / static_cast<double>(t);
    }
    weight[k] = w / binom;
  }

  ShapExplanation out;
  out.phi.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    double phi = 0.0;
    for (std::size_t s = 0; s < coalitions; ++s) {
      if (s & bit) continue;
      const auto size = static_cast<std::size_t>(__builtin_popcountll(s));
      phi += weight[size] * (value[s | bit] - value[s]);
    }
    out.phi[i] = phi;
  }
  out.base_value = value.front();
  out.fx = fx;
  return out;
}

/// Interventional Shapley values of `score` at `x` by full coalition
/// enumeration. v(S) averages score(x_S, b_rest) over the background rows;
/// phi_i = sum over S not containing i of |S|!(n-|S|-1)!/n! (v(S+i) - v(S)).
/// All rows are NaN-coded and have length n.
template <typename Score>
ShapExplanation shap_enumerate(Score&& score, std::span<const double> x,
                               std::span<const std::vector<double>> background) {
  const std::size_t n = x.size();
  if (n > kMaxExactShapFeatures) {
    throw Error(ErrorCode::TooManyFeatures, "exact Shapley enumeration supports at most 12 features",
                {{"features", n}});
  }
  if (background.empty()) throw Error(ErrorCode::EmptyBackground, "background set is empty");

  const std::size_t coalitions = std::size_t{1} << n;
  std::vector<double> value(coalitions, 0.0);
  std::vector<double> hybrid(n);
  for (std::size_t s = 0; s < coalitions; ++s) {
    double sum = 0.0;
    for (const auto& b : background) {
      for (std::size_t j = 0; j < n; ++j) hybrid[j] = ((s >> j) & 1U) ? x[j] : b[j];
      sum += score(hybrid.data());
    }
    value[s] = sum / static_cast<double>(background.size());
  }

  return shapley_from_values(value, n, score(x.data()));
}
}  // namespace detail

/// Exact interventional SHAP for the forest's positive-class probability.
ShapExplanation shap_exact(const ModelArtifact& model, std::span<const Cell> x,
                           std::span<const std::vector<Cell>> background);

/// As above with NaN-coded rows; the hot path used by global_importance.
ShapExplanation shap_exact_dense(const ModelArtifact& model, std::span<const double> x,
                                 std::span<const std::vector<double>> background);

struct FeatureImportance {
  std::string feature;
  std::string display_label;
  double mean_abs_phi = 0.0;
  double mean_signed_phi = 0.0;
  bool actionable = false;
  int rank = 0;
};

struct GlobalImportance {
  /// Ordered by rank (descending mean |phi|, ties in schema order).
  std::vector<FeatureImportance> features;
  std::size_t explained_rows = 0;
  std::size_t background_rows = 0;
  double mean_base_value = 0.0;

  nlohmann::json to_json() const;
};

/// Explains min(sample_size, |ds|) rows drawn with the ExplainSample stream
/// against a background of min(background_size, |ds|) rows drawn with the
/// ExplainBackground stream, then aggregates per feature.
GlobalImportance global_importance(const ModelArtifact& model, const Dataset& ds,
                                   std::size_t sample_size, std::uint64_t seed,
                                   std::size_t background_size = kDefaultBackgroundRows);

}  // namespace steer
