#include "steer/version_log.hpp"

#include "steer/canonical_json.hpp"
#include "steer/error.hpp"

namespace steer {

using nlohmann::json;

std::string_view cause_name(VersionCause cause) noexcept {
  switch (cause) {
    case VersionCause::Initial: return "initial";
    case VersionCause::Manual: return "manual";
    case VersionCause::Automated: return "automated";
    case VersionCause::Rollback: return "rollback";
  }
  return "initial";
}

VersionCause parse_cause(std::string_view name) {
  for (auto c : {VersionCause::Initial, VersionCause::Manual, VersionCause::Automated, VersionCause::Rollback}) {
    if (cause_name(c) == name) return c;
  }
  throw Error(ErrorCode::JournalParseError, "unknown version cause '" + std::string(name) + "'");
}

json SessionVersion::to_record() const {
  json r = {{"v", kRecordVersion},
            {"version_id", version_id},
            {"parent", parent ? json(*parent) : json(nullptr)},
            {"cause", cause_name(cause)},
            {"config", config_payload},
            {"snapshot", dataset_snapshot_id},
            {"dataset_rows", dataset_rows},
            {"model", model_id},
            {"bundle", bundle_id},
            {"metrics", metrics.to_json()},
            {"accuracy_delta", accuracy_delta ? json(*accuracy_delta) : json(nullptr)},
            {"summary", summary},
            {"corrections", corrections},
            {"created_at", created_at}};
  return r;
}

SessionVersion SessionVersion::from_record(const json& r) {
  SessionVersion v;
  if (r.at("v").get<int>() != kRecordVersion) {
    throw Error(ErrorCode::JournalParseError, "unsupported journal record version");
  }
  v.version_id = r.at("version_id").get<std::uint64_t>();
  if (!r.at("parent").is_null()) v.parent = r["parent"].get<std::uint64_t>();
  v.cause = parse_cause(r.at("cause").get<std::string>());
  v.config_payload = r.at("config");
  v.dataset_snapshot_id = r.at("snapshot").get<std::string>();
  v.dataset_rows = r.at("dataset_rows").get<std::size_t>();
  v.model_id = r.at("model").get<std::string>();
  v.bundle_id = r.at("bundle").get<std::string>();
  v.metrics = ModelMetrics::from_json(r.at("metrics"));
  if (!r.at("accuracy_delta").is_null()) v.accuracy_delta = read_real(r["accuracy_delta"]);
  v.summary = r.at("summary").get<std::string>();
  v.corrections = r.at("corrections");
  v.created_at = r.at("created_at").get<std::string>();
  return v;
}

const SessionVersion& SteeringSession::active() const {
  const auto* v = find(active_version);
  if (v == nullptr) throw Error(ErrorCode::UnknownVersion, "session has no active version");
  return *v;
}

const SessionVersion* SteeringSession::find(std::uint64_t version_id) const noexcept {
  for (const auto& v : versions) {
    if (v.version_id == version_id) return &v;
  }
  return nullptr;
}

}  // namespace steer
