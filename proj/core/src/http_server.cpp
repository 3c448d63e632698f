#include "steer/http_server.hpp"

#include <cstdlib>
#include <utility>

#include <httplib.h>

namespace steer {

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

HttpServerConfig HttpServerConfig::from_env() {
  HttpServerConfig c;
  try {
    c.port = std::stoi(env_or("STEER_PORT", "8080"));
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfiguration, "STEER_PORT is not a port number");
  }
  c.ui_origin = env_or("STEER_UI_ORIGIN", "*");
  return c;
}

struct HttpServer::Impl {
  ApiService& api;
  HttpServerConfig config;
  httplib::Server server;
  int port = -1;

  Impl(ApiService& a, HttpServerConfig c) : api(a), config(std::move(c)) {
    const int threads = config.worker_threads;
    server.new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<size_t>(threads)); };
    server.set_default_headers({{"Access-Control-Allow-Origin", config.ui_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.set_payload_max_length(256u << 20);

    auto handle = [this](const httplib::Request& req, httplib::Response& res) {
      ApiRequest request{req.method, req.path, req.body, {}};
      for (const auto& [name, part] : req.files) request.parts.emplace(name, part.content);
      const ApiResponse response = api.dispatch(request);
      res.status = response.status;
      res.set_content(response.body, response.content_type);
    };
    const std::string any = R"(/.*)";
    server.Get(any, handle);
    server.Post(any, handle);
    server.Put(any, handle);
    server.Options(any, [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }
};

HttpServer::HttpServer(ApiService& api, HttpServerConfig config)
    : impl_(std::make_unique<Impl>(api, std::move(config))) {}

HttpServer::~HttpServer() {
  if (impl_->server.is_running()) impl_->server.stop();
}

int HttpServer::bind() {
  if (impl_->config.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->config.host);
  } else if (impl_->server.bind_to_port(impl_->config.host, impl_->config.port)) {
    impl_->port = impl_->config.port;
  }
  if (impl_->port < 0) {
    throw Error(ErrorCode::IoError, "cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port));
  }
  return impl_->port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace steer
