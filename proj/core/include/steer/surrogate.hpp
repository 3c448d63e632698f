#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steer/dataset.hpp"
#include "steer/forest.hpp"
#include "steer/tree.hpp"

namespace steer {

struct SurrogateOptions {
  int max_depth = 4;
  int min_leaf = 10;
  std::size_t top_rules = 5;
};

enum class ConditionOp { LessEqual, Greater };

struct RuleCondition {
  std::string feature;
  std::size_t feature_index = 0;
  ConditionOp op = ConditionOp::LessEqual;
  double threshold = 0.0;
  /// Whether a missing value satisfies the condition, per the surrogate's
  /// missing-value routing along the path.
  bool missing_included = false;

  bool holds(const Cell& value) const noexcept {
    if (!value) return missing_included;
    return op == ConditionOp::LessEqual ? *value <= threshold : *value > threshold;
  }
};

struct DecisionRule {
  /// At most one lower and one upper bound per feature, in schema order.
  std::vector<RuleCondition> conditions;
  int predicted_label = 0;
  std::string predicted_class;
  std::size_t support = 0;
  double coverage = 0.0;
  /// Fraction of covered rows the black-box model assigns to predicted_label.
  double confidence = 0.0;
  double score = 0.0;

  bool matches(const Instance& row) const noexcept;
  nlohmann::json to_json() const;
};

struct SurrogateResult {
  std::vector<DecisionRule> rules;
  std::size_t total_rules = 0;
  double fidelity = 0.0;
  DecisionTree tree;
};

/// Distils the model into one shallow CART tree fitted to the model's own
/// argmax predictions on `ds`, turns each leaf path into a rule and keeps
/// the best `top_rules` by coverage x confidence.
SurrogateResult surrogate_rules(const ModelArtifact& model, const Dataset& ds,
                                const SurrogateOptions& options = {});

}  // namespace steer
