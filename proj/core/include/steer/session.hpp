#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "steer/bundle.hpp"
#include "steer/corrections.hpp"
#include "steer/manual_config.hpp"
#include "steer/store.hpp"
#include "steer/version_log.hpp"

namespace steer {

/// Produces the created_at stamp of new versions.
using Clock = std::function<std::string()>;

/// UTC now, ISO-8601 with a trailing Z.
std::string utc_now_iso8601();
/// Always returns `stamp`; for reproducible journals in tests.
Clock fixed_clock(std::string stamp = "1970-01-01T00:00:00Z");

struct SteeringOptions {
  GuardrailPolicy policy;
  BundleOptions bundle;
  Clock clock = utc_now_iso8601;
};

/// ingest -> train -> bundle -> version 1. Nothing is written unless every
/// step succeeds; the project only becomes visible once published.
SteeringSession initialize_project(const Store& store, std::string_view csv_text,
                                   const nlohmann::json& schema_doc, const Hyperparameters& hp,
                                   const SteeringOptions& options = {});

/// What a successful manual steer returns besides the version.
struct ManualSteerResult {
  SessionVersion version;
  ManualVerdict verdict;
};

/// validate -> apply_manual -> retrain (same hyperparameters and seed) ->
/// bundle with delta against the base version -> append. On any failure
/// neither the journal nor `session` changes.
ManualSteerResult steer_manual(const ProjectStore& project, SteeringSession& session,
                               const ManualConfiguration& cfg, const SteeringOptions& options = {});

SessionVersion steer_automated(const ProjectStore& project, SteeringSession& session,
                               const CorrectionPlan& plan, const SteeringOptions& options = {});

/// New version (cause rollback) pointing at the target's snapshot, model
/// and bundle. `base_version`, when given, must be the active version.
SessionVersion rollback(const ProjectStore& project, SteeringSession& session, std::uint64_t target_version,
                        std::optional<std::uint64_t> base_version = std::nullopt,
                        const SteeringOptions& options = {});

struct HistoryEntry {
  std::uint64_t version_id = 0;
  std::optional<std::uint64_t> parent;
  VersionCause cause = VersionCause::Initial;
  double accuracy = 0.0;
  std::optional<double> delta;
  std::string summary;
  std::string created_at;

  nlohmann::json to_json() const;
};

std::vector<HistoryEntry> history(const SteeringSession& session);

struct VersionCheck {
  std::uint64_t version_id = 0;
  std::vector<std::string> mismatches;
};

struct VerifyReport {
  std::vector<VersionCheck> versions;

  std::size_t mismatch_count() const noexcept;
  bool ok() const noexcept { return mismatch_count() == 0; }
};

/// Re-ingests source.csv and replays every journal record's configuration,
/// regenerating snapshots, models and bundles, and compares them byte for
/// byte with what the store holds.
VerifyReport verify_project(const ProjectStore& project, const SteeringOptions& options = {});

}  // namespace steer
