#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steer/data_insights.hpp"
#include "steer/dataset.hpp"
#include "steer/forest.hpp"
#include "steer/shapley.hpp"
#include "steer/surrogate.hpp"

namespace steer {

struct BundleOptions {
  std::size_t importance_sample = 100;
  std::size_t background_rows = kDefaultBackgroundRows;
  SurrogateOptions surrogate;
};

/// Everything the dashboard shows for one model version.
struct ExplanationBundle {
  static constexpr int kFormatVersion = 1;

  std::string snapshot_id;
  std::size_t dataset_rows = 0;
  std::vector<FeatureSpec> features;
  ModelMetrics metrics;
  std::optional<double> accuracy_delta;
  GlobalImportance global_importance;
  std::vector<DecisionRule> top_rules;
  std::size_t total_rules = 0;
  double surrogate_fidelity = 0.0;
  std::vector<KeyInsight> insights;
  std::vector<DensityDistribution> distributions;
  DataQualityReport quality;

  nlohmann::json to_json() const;
  std::string canonical_bytes() const;
};

/// Regenerates every explanation for `model` trained on `ds`. Shapley
/// sampling is seeded from the model's own hyperparameter seed.
ExplanationBundle build_bundle(const ModelArtifact& model, const ModelMetrics& metrics,
                               const Dataset& ds, std::optional<double> previous_accuracy,
                               const BundleOptions& options = {});

}  // namespace steer
