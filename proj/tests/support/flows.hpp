#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace steer::test {

/// Stamp used by both flows so their journals can be compared.
inline constexpr const char* kFlowClock = "2026-01-01T00:00:00Z";

struct FlowResult {
  std::string project_id;
  std::string journal;
  int exit_code = 0;
  std::string output;
};

/// steerctl ingest + steer of the Pima fixtures into `data_dir`.
FlowResult run_cli_flow(const std::filesystem::path& data_dir);

/// The same steps as POST/PUT requests against a live HTTP server backed by
/// `data_dir`, filling each base_version from GET /versions.
FlowResult run_http_flow(const std::filesystem::path& data_dir);

}  // namespace steer::test
