#pragma once

#include <memory>
#include <string>

#include "steer/api.hpp"

namespace steer {

struct HttpServerConfig {
  std::string host = "0.0.0.0";
  /// 0 picks a free port.
  int port = 8080;
  /// Access-Control-Allow-Origin value.
  std::string ui_origin = "*";
  int worker_threads = 8;

  /// STEER_PORT and STEER_UI_ORIGIN, falling back to the defaults above.
  static HttpServerConfig from_env();
};

/// HTTP/1.1 front end over an ApiService.
class HttpServer {
 public:
  HttpServer(ApiService& api, HttpServerConfig config);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; returns the bound port. Throws IoError.
  int bind();
  /// Serves until stop(). bind() must have succeeded.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace steer
