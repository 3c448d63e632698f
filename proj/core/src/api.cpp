#include "steer/api.hpp"

#include <regex>
#include <utility>

#include "steer/canonical_json.hpp"
#include "steer/json_schema.hpp"

namespace steer {

using nlohmann::json;

json error_envelope(const Error& e) {
  return {{"error",
           {{"code", code_name(e.code())},
            {"message", e.what()},
            {"details", e.details().is_null() ? json::object() : e.details()}}}};
}

json version_summary(const std::string& project_id, const SessionVersion& v) {
  json out = {{"project_id", project_id},
              {"version_id", v.version_id},
              {"parent", v.parent ? json(*v.parent) : json(nullptr)},
              {"cause", cause_name(v.cause)},
              {"accuracy", v.metrics.holdout_accuracy},
              {"accuracy_delta", v.accuracy_delta ? json(*v.accuracy_delta) : json(nullptr)},
              {"dataset_rows", v.dataset_rows},
              {"n_features", v.metrics.n_features},
              {"snapshot_id", v.dataset_snapshot_id},
              {"model_id", v.model_id},
              {"bundle_id", v.bundle_id},
              {"summary", v.summary},
              {"created_at", v.created_at}};
  if (v.cause == VersionCause::Automated) out["corrections"] = v.corrections;
  return out;
}

namespace {

json parse_body(std::string_view body, const char* what) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidRequest, std::string(what) + " is not valid JSON: " + e.what());
  }
}

ApiResponse ok(const json& doc, int status = 200) { return {status, canonical_dump(doc)}; }

}  // namespace

ApiService::ApiService(Store store, SteeringOptions options)
    : store_(std::move(store)), options_(std::move(options)) {}

std::mutex& ApiService::writer_mutex(const std::string& project_id) {
  std::lock_guard lock(registry_mu_);
  auto& slot = writers_[project_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

json ApiService::create_project(std::string_view csv_text, const json& schema_doc, const json& hyperparameters) {
  require_valid("schema_document", schema_doc);
  require_valid("hyperparameters", hyperparameters);
  const Hyperparameters hp = Hyperparameters::from_json(hyperparameters);
  const SteeringSession session = initialize_project(store_, csv_text, schema_doc, hp, options_);
  return {{"project_id", session.project_id}, {"version", version_summary(session.project_id, session.active())}};
}

std::string ApiService::bundle_bytes(const std::string& project_id) {
  const ProjectStore project = store_.open_project(project_id);
  const SteeringSession session = project.load_session();
  return project.get_bundle_bytes(session.active().bundle_id);
}

json ApiService::issues(const std::string& project_id) {
  const ProjectStore project = store_.open_project(project_id);
  const SteeringSession session = project.load_session();
  const SessionVersion& active = session.active();
  const auto key = std::make_pair(project_id, active.dataset_snapshot_id);
  json list;
  {
    std::lock_guard lock(issues_mu_);
    if (auto it = issues_cache_.find(key); it != issues_cache_.end()) list = it->second;
  }
  if (list.is_null()) {
    const Dataset ds = project.get_snapshot(active.dataset_snapshot_id);
    list = json::array();
    for (const auto& issue : detect_issues(ds, session.hyperparameters)) list.push_back(issue.to_json());
    std::lock_guard lock(issues_mu_);
    issues_cache_.emplace(key, list);
  }
  return {{"project_id", project_id},
          {"version_id", active.version_id},
          {"snapshot_id", active.dataset_snapshot_id},
          {"issues", list}};
}

json ApiService::steer_manual(const std::string& project_id, const json& body) {
  require_valid("manual_config", body);
  const ManualConfiguration cfg = ManualConfiguration::from_json(body);
  const ProjectStore project = store_.open_project(project_id);
  std::lock_guard lock(writer_mutex(project_id));
  SteeringSession session = project.load_session();
  const auto result = steer::steer_manual(project, session, cfg, options_);
  json out = version_summary(project_id, result.version);
  out["verdict"] = result.verdict.to_json();
  return out;
}

json ApiService::steer_auto(const std::string& project_id, const json& body) {
  require_valid("correction_plan", body);
  const ProjectStore project = store_.open_project(project_id);
  std::lock_guard lock(writer_mutex(project_id));
  SteeringSession session = project.load_session();
  const CorrectionPlan plan = CorrectionPlan::from_json(body, session.hyperparameters.seed);
  return version_summary(project_id, steer_automated(project, session, plan, options_));
}

json ApiService::rollback(const std::string& project_id, const json& body) {
  require_valid("rollback_request", body);
  const auto target = body.at("version_id").get<std::uint64_t>();
  std::optional<std::uint64_t> base;
  if (body.contains("base_version")) base = body.at("base_version").get<std::uint64_t>();
  const ProjectStore project = store_.open_project(project_id);
  std::lock_guard lock(writer_mutex(project_id));
  SteeringSession session = project.load_session();
  return version_summary(project_id, steer::rollback(project, session, target, base, options_));
}

json ApiService::versions(const std::string& project_id) {
  const SteeringSession session = store_.open_project(project_id).load_session();
  json list = json::array();
  for (const auto& entry : history(session)) list.push_back(entry.to_json());
  return {{"project_id", project_id}, {"active_version", session.active_version}, {"versions", list}};
}

ApiResponse ApiService::dispatch(const ApiRequest& request) {
  static const std::regex project_route(R"(^/projects/([A-Za-z0-9_-]+)/(bundle|issues|config/manual|config/auto|rollback|versions)/?$)");
  try {
    const std::string& m = request.method;
    if (request.path == "/projects" || request.path == "/projects/") {
      if (m != "POST") throw Error(ErrorCode::NotFound, "no route " + m + " " + request.path);
      const auto csv = request.parts.find("csv");
      const auto schema = request.parts.find("schema");
      if (csv == request.parts.end() || schema == request.parts.end()) {
        throw Error(ErrorCode::InvalidRequest, "multipart fields 'csv' and 'schema' are required");
      }
      const auto hp = request.parts.find("hyperparameters");
      const json hp_doc = hp == request.parts.end() ? json::object() : parse_body(hp->second, "hyperparameters");
      return ok(create_project(csv->second, parse_body(schema->second, "schema"), hp_doc), 201);
    }

    std::smatch match;
    if (!std::regex_match(request.path, match, project_route)) {
      throw Error(ErrorCode::NotFound, "no route " + m + " " + request.path);
    }
    const std::string id = match[1];
    const std::string action = match[2];
    if (action == "bundle" && m == "GET") return {200, bundle_bytes(id)};
    if (action == "issues" && m == "GET") return ok(issues(id));
    if (action == "versions" && m == "GET") return ok(versions(id));
    if (action == "config/manual" && m == "PUT") return ok(steer_manual(id, parse_body(request.body, "body")));
    if (action == "config/auto" && m == "POST") return ok(steer_auto(id, parse_body(request.body, "body")));
    if (action == "rollback" && m == "POST") return ok(rollback(id, parse_body(request.body, "body")));
    throw Error(ErrorCode::NotFound, "no route " + m + " " + request.path);
  } catch (const Error& e) {
    return {http_status(e.code()), canonical_dump(error_envelope(e))};
  } catch (const std::exception& e) {
    const Error wrapped(ErrorCode::Internal, e.what());
    return {http_status(wrapped.code()), canonical_dump(error_envelope(wrapped))};
  }
}

}  // namespace steer
