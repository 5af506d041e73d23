#include "dysnav/api.hpp"

#include <charconv>
#include <functional>
#include <mutex>
#include <vector>

#include <fmt/format.h>

#include "httplib.h"

namespace dysnav {
namespace {

ApiResponse fail(int status, std::string_view code, std::string_view message) {
  return {status, error_body(code, message)};
}

ApiResponse fail(const Error& e) { return fail(http_status(e.code()), to_string(e.code()), e.what()); }

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    const auto slash = path.find('/');
    parts.push_back(path.substr(0, slash));
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash);
  }
  return parts;
}

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

json parse_body(std::string_view body) {
  try {
    auto j = json::parse(body);
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("malformed JSON body: {}", e.what()));
  }
}

CellRef cell_field(const json& body, const char* name) {
  if (!body.contains(name)) throw Error(ErrorCode::InvalidConfig, fmt::format("missing field '{}'", name));
  const json& v = body.at(name);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() || !v[1].is_number_unsigned()) {
    throw Error(ErrorCode::InvalidCell, fmt::format("'{}' must be [column, row] with non-negative integers", name));
  }
  return v.get<CellRef>();
}

const CellData* find_cell(const AnalysisBundle& b, std::size_t i, std::size_t j) {
  if (i >= b.grid.alpha || j >= b.grid.omega) return nullptr;
  return &b.cells[i * b.grid.omega + j];
}

json path_payload(const AnalysisBundle& b) {
  return {{"path", b.path}, {"consensus", b.consensus}, {"hierarchy", b.hierarchy ? json(*b.hierarchy) : json(nullptr)}};
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCell:
    case ErrorCode::NodeNotPresent:
    case ErrorCode::EdgeNotPresent:
      return 404;
    case ErrorCode::Io:
      return 500;
    default:
      return 400;
  }
}

json error_body(std::string_view code, std::string_view message) {
  return {{"error", {{"code", std::string(code)}, {"message", std::string(message)}}}};
}

AnalysisBundle ApiService::snapshot() const {
  std::shared_lock lock(mutex_);
  return analysis_.bundle();
}

ApiResponse ApiService::handle(std::string_view method, std::string_view path, const QueryParams& query,
                               std::string_view body) {
  try {
    if (method == "GET") return get(path, query);
    if (method == "POST" && path == "/path") return post_path(body);
    if (method == "POST" && path == "/recluster") return post_recluster(body);
    return fail(404, "NotFound", fmt::format("no route for {} {}", method, path));
  } catch (const Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(500, "Internal", e.what());
  }
}

ApiResponse ApiService::get(std::string_view path, const QueryParams& query) const {
  std::shared_lock lock(mutex_);
  const AnalysisBundle& b = analysis_.bundle();
  const auto parts = split_path(path);
  if (parts.size() == 1) {
    const auto r = parts[0];
    if (r == "config") return {200, b.config};
    if (r == "grid") {
      json cells = json::array();
      for (const auto& c : b.cells) {
        cells.push_back({{"cell", c.cell}, {"interval", c.interval}, {"cutoff", c.cutoff}, {"edge_count", c.edges.size()},
                         {"cluster_count", c.clustering.size()}});
      }
      return {200, {{"grid", b.grid}, {"nodes", b.nodes}, {"cells", std::move(cells)}}};
    }
    if (r == "similarity") return {200, {{"edges", b.similarity}, {"changes", b.changes}}};
    if (r == "changes") return {200, b.changes};
    if (r == "consensus") return {200, path_payload(b)};
    if (r == "hierarchy") {
      HierarchyMode mode = b.config.mode;
      if (const auto it = query.find("mode"); it != query.end()) mode = parse_mode(it->second);
      const auto& h = analysis_.hierarchy(mode);
      if (!h) return fail(404, "EmptyGraph", "no hierarchy for the current selection");
      return {200, *h};
    }
  }
  if (parts.size() == 3 && (parts[0] == "graphs" || parts[0] == "clusters")) {
    const auto i = parse_index(parts[1]);
    const auto j = parse_index(parts[2]);
    const CellData* cell = (i && j) ? find_cell(b, *i, *j) : nullptr;
    if (!cell) return fail(404, to_string(ErrorCode::InvalidCell), fmt::format("no cell at {}/{}", parts[1], parts[2]));
    if (parts[0] == "graphs") {
      json edges = json::array();
      for (const auto& e : cell->edges) edges.push_back({{"source", e.u}, {"target", e.v}, {"weight", e.weight}});
      return {200, {{"cell", cell->cell}, {"interval", cell->interval}, {"cutoff", cell->cutoff},
                    {"weight_range", json::array({b.grid.weight_range.first, b.grid.weight_range.second})},
                    {"nodes", b.nodes}, {"links", std::move(edges)}}};
    }
    return {200, {{"cell", cell->cell}, {"clustering", cell->clustering}}};
  }
  return fail(404, "NotFound", fmt::format("no route for GET {}", path));
}

ApiResponse ApiService::post_path(std::string_view body) {
  const json req = parse_body(body);
  const CellRef from = cell_field(req, "from");
  const CellRef to = cell_field(req, "to");
  std::unique_lock lock(mutex_);
  analysis_.select_path(from, to);
  return {200, path_payload(analysis_.bundle())};
}

ApiResponse ApiService::post_recluster(std::string_view body) {
  const json req = parse_body(body);
  if (!req.contains("tau") || !req.at("tau").is_number()) throw Error(ErrorCode::InvalidTau, "'tau' must be a number");
  const double tau = req.at("tau").get<double>();
  std::unique_lock lock(mutex_);
  analysis_.recluster(tau);
  const AnalysisBundle& b = analysis_.bundle();
  json clusterings = json::array();
  for (const auto& c : b.cells) clusterings.push_back({{"cell", c.cell}, {"clustering", c.clustering}});
  return {200, {{"tau", tau}, {"clusterings", std::move(clusterings)}, {"edges", b.similarity}, {"changes", b.changes},
                {"path", b.path}, {"consensus", b.consensus}}};
}

struct ApiServer::Impl {
  httplib::Server server;
};

ApiServer::ApiServer(ApiService& service) : impl_(std::make_unique<Impl>()) {
  const auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  const auto query_of = [](const httplib::Request& req) {
    QueryParams q;
    for (const auto& [k, v] : req.params) q.emplace(k, v);
    return q;
  };
  impl_->server.Get(".*", [&service, reply, query_of](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.handle("GET", req.path, query_of(req)));
  });
  impl_->server.Post(".*", [&service, reply, query_of](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.handle("POST", req.path, query_of(req), req.body));
  });
}

ApiServer::~ApiServer() = default;

int ApiServer::bind(std::uint16_t port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port("127.0.0.1");
  } else if (!impl_->server.bind_to_port("127.0.0.1", port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorCode::Io, fmt::format("cannot bind port {}", port));
  return bound;
}

void ApiServer::run() { impl_->server.listen_after_bind(); }

void ApiServer::stop() { impl_->server.stop(); }

void serve_api(ApiService& service, std::uint16_t port, const std::function<void(int)>& on_bound) {
  ApiServer server(service);
  const int bound = server.bind(port);
  if (on_bound) on_bound(bound);
  server.run();
}

}  // namespace dysnav
