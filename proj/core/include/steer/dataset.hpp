#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace steer {

enum class FeatureKind { Numeric, Binary, Categorical };

std::string_view kind_name(FeatureKind kind) noexcept;

/// One annotated column of the schema. Units, actionability and plausible
/// ranges are domain knowledge shipped in the schema document; nothing here
/// is inferred from the data.
struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  std::optional<std::string> unit;
  bool actionable = false;
  std::optional<double> plausible_min;
  std::optional<double> plausible_max;
  /// A cell parsed as exactly 0 is treated as missing.
  bool zero_is_missing = false;
  std::string display_label;

  bool operator==(const FeatureSpec&) const = default;
};

struct TargetSpec {
  std::string name;
  /// Exactly two labels; index 1 is the positive class.
  std::vector<std::string> labels;

  bool operator==(const TargetSpec&) const = default;
};

/// The sidecar schema document: {features:[...], target:{name, labels}}.
struct SchemaDocument {
  std::vector<FeatureSpec> features;
  TargetSpec target;

  static SchemaDocument from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  bool operator==(const SchemaDocument&) const = default;
};

using Cell = std::optional<double>;

struct Instance {
  std::vector<Cell> values;
  int label = 0;

  bool operator==(const Instance&) const = default;
};

struct ValueRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const noexcept { return lo <= v && v <= hi; }
  bool operator==(const ValueRange&) const = default;
};

using RangeMap = std::map<std::string, ValueRange>;

/// Immutable labelled table. The snapshot id is the SHA-256 of the canonical
/// serialization, so two datasets with equal content share an id.
class Dataset {
 public:
  Dataset(std::vector<FeatureSpec> schema, TargetSpec target, std::vector<Instance> rows);

  const std::vector<FeatureSpec>& schema() const noexcept { return schema_; }
  const TargetSpec& target() const noexcept { return target_; }
  const std::vector<Instance>& rows() const noexcept { return rows_; }
  const std::string& snapshot_id() const noexcept { return snapshot_id_; }

  std::size_t size() const noexcept { return rows_.size(); }
  std::size_t n_features() const noexcept { return schema_.size(); }
  std::optional<std::size_t> feature_index(std::string_view name) const noexcept;
  std::vector<std::string> feature_names() const;

  /// Rows per class, indexed by label.
  std::vector<std::size_t> class_counts() const;

  /// Same schema, different rows.
  Dataset with_rows(std::vector<Instance> rows) const;

  nlohmann::json to_json() const;
  static Dataset from_json(const nlohmann::json& doc);
  std::string canonical_bytes() const;

  bool operator==(const Dataset& other) const {
    return snapshot_id_ == other.snapshot_id_;
  }

 private:
  std::vector<FeatureSpec> schema_;
  TargetSpec target_;
  std::vector<Instance> rows_;
  std::string snapshot_id_;
};

/// Parses CSV text against a schema document. Columns are located by header
/// name; extra columns are ignored. Empty cells, and zero cells in
/// zero_is_missing features, become missing.
Dataset ingest_csv(std::string_view csv_text, const SchemaDocument& schema);

/// Writes the dataset back as CSV (missing cells empty, labels by name).
std::string to_csv(const Dataset& ds);

struct FilterResult {
  Dataset dataset;
  std::size_t removed_count = 0;
};

/// Keeps a row iff every keyed feature is missing or inside its closed range.
FilterResult filter_rows(const Dataset& ds, const RangeMap& ranges);

/// Restricts the schema to `included`, preserving the original column order.
Dataset project_features(const Dataset& ds, const std::set<std::string>& included);

/// Rows at the given positions, in the given order.
Dataset select_rows(const Dataset& ds, std::span<const std::size_t> positions);

}  // namespace steer
