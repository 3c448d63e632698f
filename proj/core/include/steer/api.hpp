#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "steer/error.hpp"
#include "steer/session.hpp"
#include "steer/store.hpp"

namespace steer {

struct ApiRequest {
  std::string method;
  std::string path;
  std::string body;
  /// Multipart form fields by name (POST /projects only).
  std::map<std::string, std::string> parts;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// {"error":{"code","message","details"}} for an engine error.
nlohmann::json error_envelope(const Error& e);

/// Transport-independent request handling. Every response body is the
/// canonical serialization of an engine result or an error envelope.
///
///   POST /projects                      multipart csv, schema, hyperparameters
///   GET  /projects/{id}/bundle
///   GET  /projects/{id}/issues
///   PUT  /projects/{id}/config/manual
///   POST /projects/{id}/config/auto
///   POST /projects/{id}/rollback
///   GET  /projects/{id}/versions
///
/// Mutations on one project are serialized; GETs read committed state only
/// and never wait for a running retrain.
class ApiService {
 public:
  explicit ApiService(Store store, SteeringOptions options = {});

  ApiResponse dispatch(const ApiRequest& request);

  // Typed entry points; these throw Error instead of building an envelope.
  nlohmann::json create_project(std::string_view csv_text, const nlohmann::json& schema_doc,
                                const nlohmann::json& hyperparameters);
  std::string bundle_bytes(const std::string& project_id);
  nlohmann::json issues(const std::string& project_id);
  nlohmann::json steer_manual(const std::string& project_id, const nlohmann::json& body);
  nlohmann::json steer_auto(const std::string& project_id, const nlohmann::json& body);
  nlohmann::json rollback(const std::string& project_id, const nlohmann::json& body);
  nlohmann::json versions(const std::string& project_id);

  const Store& store() const noexcept { return store_; }

 private:
  std::mutex& writer_mutex(const std::string& project_id);

  Store store_;
  SteeringOptions options_;

  std::mutex registry_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> writers_;

  std::mutex issues_mu_;
  /// (project, snapshot) -> serialized issue list.
  std::map<std::pair<std::string, std::string>, nlohmann::json> issues_cache_;
};

/// Summary of one version as returned by the mutating endpoints.
nlohmann::json version_summary(const std::string& project_id, const SessionVersion& v);

}  // namespace steer
