#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steer/dataset.hpp"

namespace steer {

/// Quantile by linear interpolation between closest ranks, position
/// p*(n-1) on the sorted sample. `sorted` must be non-empty.
double quantile_linear(std::span<const double> sorted, double p);

struct TukeyFences {
  double q1 = 0.0, q3 = 0.0;
  double lower = 0.0, upper = 0.0;  // Q1 - 1.5 IQR, Q3 + 1.5 IQR

  bool outside(double v) const noexcept { return v < lower || v > upper; }
};

/// Fences over the non-missing cells of column `j`; nullopt when the column
/// has no values or is not a numeric feature.
std::optional<TukeyFences> tukey_fences(const Dataset& ds, std::size_t j);

/// mask[r] is true when row r repeats an earlier row (all features and label).
std::vector<bool> duplicate_mask(const Dataset& ds);

enum class InsightDirection { HigherInPositive, HigherInNegative, Similar };

std::string_view direction_name(InsightDirection d) noexcept;

struct KeyInsight {
  std::string feature;
  std::string display_label;
  std::string unit;
  std::array<double, 2> class_means{};
  std::array<std::size_t, 2> class_counts{};
  /// (mean_pos - mean_neg) / pooled sd; +-inf when the pooled sd is zero
  /// and the means differ.
  double standardized_mean_difference = 0.0;
  InsightDirection direction = InsightDirection::Similar;

  nlohmann::json to_json() const;
};

inline constexpr double kSimilarSmdThreshold = 0.1;

/// Class-conditional means for every numeric or binary feature whose values
/// are observed in both classes, sorted by |SMD| descending (ties in schema order).
std::vector<KeyInsight> key_insights(const Dataset& ds);

struct DensityDistribution {
  std::string feature;
  std::string display_label;
  /// 11 ascending edges for 10 bins; 2 equal edges for a constant feature;
  /// empty when every value is missing.
  std::vector<double> bin_edges;
  /// counts_per_class[label][bin]
  std::array<std::vector<std::size_t>, 2> counts_per_class;
  std::size_t missing_count = 0;

  std::size_t bins() const noexcept { return counts_per_class[0].size(); }
  nlohmann::json to_json() const;
};

inline constexpr std::size_t kHistogramBins = 10;

std::vector<DensityDistribution> density_distributions(const Dataset& ds);

struct FeatureQuality {
  std::string feature;
  std::size_t missing_count = 0;
  std::size_t outlier_count = 0;
  std::size_t observed_count = 0;
  double missing_fraction = 0.0;
  /// Outliers over observed cells of this feature.
  double outlier_fraction = 0.0;
  std::optional<TukeyFences> fences;
};

struct DataQualityReport {
  double completeness = 1.0;
  double outlier_cleanliness = 1.0;
  double uniqueness = 1.0;
  double class_balance = 1.0;
  double composite = 1.0;

  std::size_t rows = 0;
  std::size_t total_cells = 0;
  std::size_t missing_cells = 0;
  std::size_t observed_cells = 0;
  std::size_t outlier_cells = 0;
  std::size_t duplicate_rows = 0;
  std::array<std::size_t, 2> class_counts{};

  double missing_cell_fraction = 0.0;
  double outlier_cell_fraction = 0.0;
  double duplicate_row_fraction = 0.0;

  std::vector<FeatureQuality> features;

  nlohmann::json to_json() const;
};

/// completeness = 1 - missing/total cells; outlier_cleanliness = 1 - cells
/// outside Tukey fences / observed cells; uniqueness = 1 - repeated rows /
/// rows; class_balance = min class / max class; composite = their mean.
DataQualityReport data_quality(const Dataset& ds);

}  // namespace steer
