#include "steer/bundle.hpp"

#include "steer/canonical_json.hpp"

namespace steer {

using nlohmann::json;

json ExplanationBundle::to_json() const {
  json feature_list = json::array();
  for (const auto& f : features) {
    feature_list.push_back({{"name", f.name},
                            {"display_label", f.display_label},
                            {"unit", f.unit ? json(*f.unit) : json(nullptr)},
                            {"actionable", f.actionable}});
  }
  json rules = json::array();
  for (const auto& r : top_rules) rules.push_back(r.to_json());
  json insight_list = json::array();
  for (const auto& k : insights) insight_list.push_back(k.to_json());
  json histograms = json::array();
  for (const auto& d : distributions) histograms.push_back(d.to_json());

  json out = {{"v", kFormatVersion},
              {"dataset", {{"snapshot_id", snapshot_id}, {"rows", dataset_rows}, {"features", std::move(feature_list)}}},
              {"metrics", metrics.to_json()},
              {"global_importance", global_importance.to_json()},
              {"top_rules", std::move(rules)},
              {"total_rules", total_rules},
              {"surrogate_fidelity", surrogate_fidelity},
              {"insights", std::move(insight_list)},
              {"distributions", std::move(histograms)},
              {"quality", quality.to_json()}};
  if (accuracy_delta) out["accuracy_delta"] = *accuracy_delta;
  return out;
}

std::string ExplanationBundle::canonical_bytes() const { return canonical_dump(to_json()); }

ExplanationBundle build_bundle(const ModelArtifact& model, const ModelMetrics& metrics,
                               const Dataset& ds, std::optional<double> previous_accuracy,
                               const BundleOptions& options) {
  ExplanationBundle b;
  b.snapshot_id = ds.snapshot_id();
  b.dataset_rows = ds.size();
  b.features = ds.schema();
  b.metrics = metrics;
  if (previous_accuracy) b.accuracy_delta = metrics.holdout_accuracy - *previous_accuracy;

  b.global_importance = global_importance(model, ds, options.importance_sample,
                                          model.hyperparameters.seed, options.background_rows);
  auto surrogate = surrogate_rules(model, ds, options.surrogate);
  b.top_rules = std::move(surrogate.rules);
  b.total_rules = surrogate.total_rules;
  b.surrogate_fidelity = surrogate.fidelity;
  b.insights = key_insights(ds);
  b.distributions = density_distributions(ds);
  b.quality = data_quality(ds);
  return b;
}

}  // namespace steer
