#include "flows.hpp"

#include <sstream>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "steer/api.hpp"
#include "steer/cli.hpp"
#include "steer/http_server.hpp"

namespace steer::test {

using nlohmann::json;

namespace {

std::string journal_of(const std::filesystem::path& data_dir, const std::string& id) {
  return read_file((data_dir / "projects" / id / "journal.jsonl").string());
}

}  // namespace

FlowResult run_cli_flow(const std::filesystem::path& data_dir) {
  FlowResult r;
  std::ostringstream out, err;
  const std::vector<std::string> common = {"--data-dir", data_dir.string(), "--fixed-clock", kFlowClock};
  std::vector<std::string> ingest = {"ingest", fixture_path("pima.csv"), fixture_path("pima_schema.json"),
                                     fixture_path("pima_hyperparameters.json")};
  ingest.insert(ingest.end(), common.begin(), common.end());
  r.exit_code = run_cli(ingest, out, err);
  if (r.exit_code != 0) {
    r.output = out.str() + err.str();
    return r;
  }
  r.project_id = out.str().substr(std::string("project_id ").size(), 5);
  std::vector<std::string> steer = {"steer", r.project_id, fixture_path("pima_steering_script.json")};
  steer.insert(steer.end(), common.begin(), common.end());
  r.exit_code = run_cli(steer, out, err);
  r.output = out.str() + err.str();
  r.journal = journal_of(data_dir, r.project_id);
  return r;
}

FlowResult run_http_flow(const std::filesystem::path& data_dir) {
  SteeringOptions options;
  options.clock = fixed_clock(kFlowClock);
  ApiService api(Store(data_dir), options);
  HttpServerConfig cfg;
  cfg.host = "127.0.0.1";
  cfg.port = 0;
  HttpServer server(api, cfg);
  const int port = server.bind();
  std::thread serving([&] { server.run(); });

  FlowResult r;
  try {
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(300, 0);
    const httplib::MultipartFormDataItems items = {
        {"csv", read_file(fixture_path("pima.csv")), "pima.csv", "text/csv"},
        {"schema", read_file(fixture_path("pima_schema.json")), "schema.json", "application/json"},
        {"hyperparameters", read_file(fixture_path("pima_hyperparameters.json")), "hp.json", "application/json"},
    };
    const auto created = client.Post("/projects", items);
    if (!created || created->status != 201) throw std::runtime_error("create failed");
    r.project_id = json::parse(created->body).at("project_id");
    const std::string base = "/projects/" + r.project_id;

    const json script = json::parse(read_file(fixture_path("pima_steering_script.json")));
    for (const auto& step : script) {
      const std::string type = step.at("type");
      json payload = step.at("payload");
      if (type != "rollback" && !payload.contains("base_version")) {
        const auto versions = client.Get(base + "/versions");
        if (!versions || versions->status != 200) throw std::runtime_error("versions failed");
        payload["base_version"] = json::parse(versions->body).at("active_version");
      }
      httplib::Result res;
      if (type == "manual") {
        res = client.Put(base + "/config/manual", payload.dump(), "application/json");
      } else if (type == "auto") {
        res = client.Post(base + "/config/auto", payload.dump(), "application/json");
      } else {
        res = client.Post(base + "/rollback", payload.dump(), "application/json");
      }
      if (!res || res->status != 200) {
        throw std::runtime_error(type + " failed: " + (res ? res->body : std::string("no response")));
      }
      r.output += res->body + "\n";
    }
    r.journal = journal_of(data_dir, r.project_id);
  } catch (const std::exception& e) {
    r.exit_code = 2;
    r.output += e.what();
  }
  server.stop();
  serving.join();
  return r;
}

}  // namespace steer::test
