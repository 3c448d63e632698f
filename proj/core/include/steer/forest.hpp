#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steer/dataset.hpp"
#include "steer/tree.hpp"

namespace steer {

struct Hyperparameters {
  int n_trees = 100;
  int max_depth = 6;
  int min_leaf = 5;
  /// Fraction of features drawn as split candidates at every node.
  double feature_subsample = 0.6;
  std::uint64_t seed = 42;

  void validate() const;
  nlohmann::json to_json() const;
  /// Missing keys keep their defaults.
  static Hyperparameters from_json(const nlohmann::json& doc);

  bool operator==(const Hyperparameters&) const = default;
};

/// Trained random forest. Immutable once built; safe to share between
/// concurrent predictors.
struct ModelArtifact {
  static constexpr int kFormatVersion = 1;

  std::vector<std::string> feature_names;
  Hyperparameters hyperparameters;
  std::string train_snapshot_id;
  std::size_t train_size = 0;
  std::vector<DecisionTree> trees;

  /// Mean leaf distribution over trees; `x` is NaN-coded, length = features.
  ClassProbabilities proba(const double* x) const noexcept;
  double positive_proba(const double* x) const noexcept { return proba(x)[1]; }

  void validate() const;
  nlohmann::json to_json() const;
  static ModelArtifact from_json(const nlohmann::json& doc);
  std::string canonical_bytes() const;
};

struct ConfusionCounts {
  // rows = actual class, cols = predicted class
  std::size_t tn = 0, fp = 0, fn = 0, tp = 0;

  std::size_t total() const noexcept { return tn + fp + fn + tp; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct ModelMetrics {
  double holdout_accuracy = 0.0;
  std::size_t train_size = 0;
  std::size_t holdout_size = 0;
  std::size_t n_features = 0;
  ConfusionCounts confusion;
  /// Fraction of evaluated rows predicted positive.
  double positive_rate = 0.0;

  nlohmann::json to_json() const;
  static ModelMetrics from_json(const nlohmann::json& doc);
  bool operator==(const ModelMetrics&) const = default;
};

struct HoldoutSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> holdout;
};

/// Stratified 80/20 split. Each class is shuffled with the HoldoutSplit
/// stream (class 0 first) and round(0.2 * count) of its rows, capped so at
/// least one stays in training, go to the hold-out. Both index lists are
/// returned ascending.
HoldoutSplit stratified_split(const Dataset& ds, std::uint64_t seed);

struct TrainResult {
  ModelArtifact model;
  ModelMetrics metrics;
};

/// Fits the forest on the training part of the split and scores it on the
/// hold-out. Deterministic in (ds, hp): tree t draws its bootstrap and its
/// per-split feature subsets from stream (seed, TreeBootstrap, t).
TrainResult train(const Dataset& ds, const Hyperparameters& hp);

ClassProbabilities predict_proba(const ModelArtifact& model, std::span<const Cell> x);

/// Argmax class; ties go to class 0.
inline int argmax(const ClassProbabilities& p) noexcept { return p[1] > p[0] ? 1 : 0; }

ModelMetrics evaluate(const ModelArtifact& model, const Dataset& ds);

}  // namespace steer
