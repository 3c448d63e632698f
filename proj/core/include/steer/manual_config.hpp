#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steer/dataset.hpp"
#include "steer/error.hpp"

namespace steer {

/// Expert-issued feature selection plus range filters.
struct ManualConfiguration {
  std::set<std::string> included_features;
  RangeMap ranges;
  std::uint64_t base_version = 0;

  /// The configuration that keeps `ds` as it is.
  static ManualConfiguration identity(const Dataset& ds, std::uint64_t base_version);

  nlohmann::json to_json() const;
  static ManualConfiguration from_json(const nlohmann::json& doc);
};

struct GuardrailPolicy {
  double max_row_drop_fraction = 0.5;
  std::size_t min_features = 2;
  std::size_t min_rows = 50;
  double warn_row_drop_fraction = 0.2;

  void validate() const;
  nlohmann::json to_json() const;
};

enum class VerdictKind { Ok, Warnings, Rejected };

struct GuardrailWarning {
  std::string code;
  std::string message;
};

struct ManualVerdict {
  VerdictKind kind = VerdictKind::Ok;
  std::vector<GuardrailWarning> warnings;
  /// Set iff kind == Rejected.
  std::optional<ErrorCode> rejection;
  std::string message;

  std::size_t rows_before = 0;
  std::size_t rows_after = 0;
  std::size_t dropped_rows = 0;
  double drop_fraction = 0.0;
  std::size_t features_after = 0;

  nlohmann::json to_json() const;
};

/// Checks, in order: min_features, max_row_drop, min_rows; then warns when
/// the drop fraction lies in (warn, max] or a range bound leaves the
/// feature's plausible interval. Never mutates anything.
ManualVerdict validate_manual(const ManualConfiguration& cfg, const Dataset& ds,
                              const GuardrailPolicy& policy);

/// project_features then filter_rows. Throws the rejection's guardrail code
/// if the configuration does not pass validation.
Dataset apply_manual(const ManualConfiguration& cfg, const Dataset& ds, const GuardrailPolicy& policy);

}  // namespace steer
