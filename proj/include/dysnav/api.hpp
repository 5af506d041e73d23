#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "dysnav/bundle_json.hpp"
#include "dysnav/pipeline.hpp"

namespace dysnav {

struct ApiResponse {
  int status = 200;
  json body;
};

using QueryParams = std::map<std::string, std::string, std::less<>>;

// Transport-independent request handling. GETs take a shared lock;
// /path and /recluster take it exclusively and reuse the cached grid.
class ApiService {
 public:
  explicit ApiService(Analysis analysis) : analysis_(std::move(analysis)) {}

  ApiResponse handle(std::string_view method, std::string_view path, const QueryParams& query = {},
                     std::string_view body = {});

  AnalysisBundle snapshot() const;

 private:
  ApiResponse get(std::string_view path, const QueryParams& query) const;
  ApiResponse post_path(std::string_view body);
  ApiResponse post_recluster(std::string_view body);

  mutable std::shared_mutex mutex_;
  Analysis analysis_;
};

int http_status(ErrorCode code);
json error_body(std::string_view code, std::string_view message);

// HTTP front end on 127.0.0.1. bind(0) picks a free port.
class ApiServer {
 public:
  explicit ApiServer(ApiService& service);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  int bind(std::uint16_t port);
  void run();  // blocks until stop()
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Blocks serving `service` until the process ends; `on_bound` gets the port.
void serve_api(ApiService& service, std::uint16_t port, const std::function<void(int)>& on_bound = {});

}  // namespace dysnav
