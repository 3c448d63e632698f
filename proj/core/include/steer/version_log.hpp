#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "steer/forest.hpp"

namespace steer {

enum class VersionCause { Initial, Manual, Automated, Rollback };

std::string_view cause_name(VersionCause cause) noexcept;
VersionCause parse_cause(std::string_view name);

/// One committed step of a steering session, as recorded in the journal.
struct SessionVersion {
  static constexpr int kRecordVersion = 1;

  std::uint64_t version_id = 0;
  std::optional<std::uint64_t> parent;
  VersionCause cause = VersionCause::Initial;
  nlohmann::json config_payload = nlohmann::json::object();
  std::string dataset_snapshot_id;
  std::size_t dataset_rows = 0;
  std::string model_id;
  std::string bundle_id;
  ModelMetrics metrics;
  /// metrics - parent's metrics; absent for the initial version.
  std::optional<double> accuracy_delta;
  std::string summary;
  nlohmann::json corrections = nlohmann::json::array();
  std::string created_at;

  nlohmann::json to_record() const;
  static SessionVersion from_record(const nlohmann::json& record);
};

struct SteeringSession {
  std::string project_id;
  Hyperparameters hyperparameters;
  /// Append-only, ordered by version_id.
  std::vector<SessionVersion> versions;
  std::uint64_t active_version = 0;

  const SessionVersion& active() const;
  /// nullptr when absent.
  const SessionVersion* find(std::uint64_t version_id) const noexcept;
};

}  // namespace steer
