#include "steer/cli.hpp"

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "steer/api.hpp"
#include "steer/error.hpp"
#include "steer/http_server.hpp"
#include "steer/json_schema.hpp"
#include "steer/session.hpp"

namespace steer {

namespace {

using nlohmann::json;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path, {{"path", path}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidRequest, path + " is not valid JSON: " + e.what(), {{"path", path}});
  }
}

std::string signed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.4f", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string default_data_dir() {
  const char* v = std::getenv("STEER_DATA_DIR");
  return v && *v ? v : "./data";
}

struct Common {
  std::string data_dir = default_data_dir();
  std::string fixed_clock;

  SteeringOptions options() const {
    SteeringOptions o;
    if (!fixed_clock.empty()) o.clock = steer::fixed_clock(fixed_clock);
    return o;
  }
};

void add_common(CLI::App& cmd, Common& c) {
  cmd.add_option("--data-dir", c.data_dir, "store root (default $STEER_DATA_DIR or ./data)");
  cmd.add_option("--fixed-clock", c.fixed_clock, "stamp every new version with this time (testing only)");
}

void print_step(std::ostream& out, std::size_t step, const std::string& type, const json& summary) {
  out << "step " << step << ' ' << type << " version " << summary.at("version_id").get<std::uint64_t>()
      << " accuracy " << fixed4(summary.at("accuracy").get<double>()) << " delta "
      << signed4(summary.at("accuracy_delta").get<double>()) << '\n';
}

int cmd_ingest(const Common& c, const std::string& csv_path, const std::string& schema_path,
               const std::string& hp_path, std::optional<std::uint64_t> seed_override, std::ostream& out) {
  ApiService api(Store(c.data_dir), c.options());
  json hp = hp_path.empty() ? json::object() : read_json(hp_path);
  if (seed_override) hp["seed"] = *seed_override;
  const json created = api.create_project(read_text(csv_path), read_json(schema_path), hp);
  const json& v = created.at("version");
  out << "project_id " << created.at("project_id").get<std::string>() << '\n';
  out << "version " << v.at("version_id").get<std::uint64_t>() << '\n';
  out << "accuracy " << fixed4(v.at("accuracy").get<double>()) << '\n';
  out << "rows " << v.at("dataset_rows").get<std::size_t>() << '\n';
  out << "features " << v.at("n_features").get<std::size_t>() << '\n';
  return 0;
}

int cmd_steer(const Common& c, const std::string& project_id, const std::string& script_path, std::ostream& out) {
  ApiService api(Store(c.data_dir), c.options());
  const json script = read_json(script_path);
  require_valid("steering_script", script);
  std::size_t step = 0;
  for (const auto& entry : script) {
    ++step;
    const std::string type = entry.at("type").get<std::string>();
    json payload = entry.at("payload");
    if (type != "rollback" && !payload.contains("base_version")) {
      payload["base_version"] = api.versions(project_id).at("active_version");
    }
    json summary;
    if (type == "manual") {
      summary = api.steer_manual(project_id, payload);
    } else if (type == "auto") {
      summary = api.steer_auto(project_id, payload);
    } else {
      summary = api.rollback(project_id, payload);
    }
    print_step(out, step, type, summary);
  }
  return 0;
}

int cmd_verify(const Common& c, const std::string& project_id, std::ostream& out) {
  const ProjectStore project = Store(c.data_dir).open_project(project_id);
  const VerifyReport report = verify_project(project, c.options());
  for (const auto& v : report.versions) {
    if (v.mismatches.empty()) {
      out << "version " << v.version_id << " ok\n";
    }
    for (const auto& m : v.mismatches) out << "version " << v.version_id << " mismatch " << m << '\n';
  }
  out << (report.ok() ? "OK" : "FAIL") << " versions " << report.versions.size() << " mismatches "
      << report.mismatch_count() << '\n';
  return report.ok() ? 0 : 1;
}

int cmd_history(const Common& c, const std::string& project_id, std::ostream& out) {
  const SteeringSession session = Store(c.data_dir).open_project(project_id).load_session();
  for (const auto& h : history(session)) {
    out << "version " << h.version_id << " cause " << cause_name(h.cause) << " accuracy " << fixed4(h.accuracy)
        << " delta " << (h.delta ? signed4(*h.delta) : std::string("none")) << " | " << h.summary << '\n';
  }
  out << "active " << session.active_version << '\n';
  return 0;
}

int cmd_serve(const Common& c, std::optional<int> port, std::ostream& out) {
  auto config = HttpServerConfig::from_env();
  if (port) config.port = *port;
  std::filesystem::create_directories(c.data_dir);
  ApiService api(Store(c.data_dir), c.options());
  HttpServer server(api, config);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int bound = server.bind();
  out << "listening " << config.host << ':' << bound << " data_dir " << c.data_dir << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  if (waiter.joinable()) {
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"steerctl: ingest, steer, verify and serve model steering projects"};
  app.require_subcommand(1);
  Common common;

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  std::optional<int> port;
  serve->add_option("--port", port, "listen port (default $STEER_PORT or 8080)");
  add_common(*serve, common);

  auto* ingest = app.add_subcommand("ingest", "create a project from CSV, schema and hyperparameters");
  std::string csv_path, schema_path, hp_path;
  std::optional<std::uint64_t> seed_override;
  ingest->add_option("csv", csv_path)->required();
  ingest->add_option("schema", schema_path)->required();
  ingest->add_option("hyperparameters", hp_path);
  ingest->add_option("--seed-override", seed_override, "replace the hyperparameter seed (testing only)");
  add_common(*ingest, common);

  std::string project_id, script_path;
  auto* steer_cmd = app.add_subcommand("steer", "apply a JSON steering script");
  steer_cmd->add_option("project_id", project_id)->required();
  steer_cmd->add_option("script", script_path)->required();
  add_common(*steer_cmd, common);

  auto* verify = app.add_subcommand("verify", "replay the journal and compare regenerated artifacts");
  verify->add_option("project_id", project_id)->required();
  add_common(*verify, common);

  auto* hist = app.add_subcommand("history", "print the version history");
  hist->add_option("project_id", project_id)->required();
  add_common(*hist, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (serve->parsed()) return cmd_serve(common, port, out);
    if (ingest->parsed()) return cmd_ingest(common, csv_path, schema_path, hp_path, seed_override, out);
    if (steer_cmd->parsed()) return cmd_steer(common, project_id, script_path, out);
    if (verify->parsed()) return cmd_verify(common, project_id, out);
    if (hist->parsed()) return cmd_history(common, project_id, out);
  } catch (const Error& e) {
    err << "error " << code_name(e.code()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error " << code_name(ErrorCode::Internal) << ": " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace steer
