#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "steer/dataset.hpp"
#include "steer/forest.hpp"

namespace steer {

/// Issue kinds in the order their corrections are applied.
enum class IssueKind { Duplicates, DisguisedMissing, Outliers, ClassImbalance };

inline constexpr IssueKind kAllIssueKinds[] = {IssueKind::Duplicates, IssueKind::DisguisedMissing,
                                               IssueKind::Outliers, IssueKind::ClassImbalance};

inline constexpr double kImbalanceThreshold = 0.8;

std::string_view issue_name(IssueKind kind) noexcept;
/// Throws UnknownKind.
IssueKind parse_issue_kind(std::string_view name);

/// Whether the detector for `kind` fires on `ds` (no training involved).
bool issue_present(const Dataset& ds, IssueKind kind);

struct DataIssue {
  IssueKind kind = IssueKind::Duplicates;
  double affected_fraction = 0.0;
  std::map<std::string, double> affected_per_feature;
  std::string description;
  /// holdout accuracy after the single correction minus before, trained with
  /// identical hyperparameters.
  double estimated_accuracy_impact = 0.0;
  double baseline_accuracy = 0.0;
  double corrected_accuracy = 0.0;
  std::string correction_summary;

  nlohmann::json to_json() const;
};

/// Runs the four detectors and, for each that fires, a sandbox retrain on
/// the singly-corrected data. Sorted by |impact| descending, ties in
/// application order.
std::vector<DataIssue> detect_issues(const Dataset& ds, const Hyperparameters& hp);

struct CorrectionPlan {
  std::vector<IssueKind> selected_kinds;
  std::uint64_t base_version = 0;
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
  /// `default_seed` fills a missing "seed".
  static CorrectionPlan from_json(const nlohmann::json& doc, std::uint64_t default_seed);
};

struct FeatureSummary {
  std::optional<double> mean, min, max;
  std::size_t missing_count = 0;

  nlohmann::json to_json() const;
};

struct CorrectionRecord {
  IssueKind kind = IssueKind::Duplicates;
  std::size_t rows_before = 0;
  std::size_t rows_after = 0;
  std::size_t cells_changed = 0;
  /// Per feature, schema order.
  std::vector<std::pair<std::string, FeatureSummary>> before;
  std::vector<std::pair<std::string, FeatureSummary>> after;

  nlohmann::json to_json() const;
};

struct CorrectionResult {
  Dataset dataset;
  std::vector<CorrectionRecord> applied;
};

/// Applies the selected corrections in the fixed order duplicates,
/// disguised_missing, outliers, class_imbalance. Every selected kind must be
/// detected on `ds` beforehand, otherwise StaleIssue.
///  - duplicates: drop repeated rows, keeping first occurrences
///  - disguised_missing: impute each feature's median of observed values
///  - outliers: clamp to the Tukey fences of the data entering this step
///  - class_imbalance: oversample the minority class with replacement to
///    parity (Oversampling stream of plan.seed), appended at the end
CorrectionResult apply_corrections(const CorrectionPlan& plan, const Dataset& ds);

}  // namespace steer
