#include "dysnav/bundle_json.hpp"

#include <fmt/format.h>

namespace dysnav {
namespace {

template <typename T>
json optional_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

RowAxis parse_axis(const std::string& s) {
  if (s == "slices") return RowAxis::Slices;
  if (s == "tau") return RowAxis::TauGrid;
  throw Error(ErrorCode::InvalidConfig, fmt::format("unknown row axis '{}'", s));
}

Role parse_role(const std::string& s) {
  if (s == "leader") return Role::Leader;
  if (s == "gatekeeper") return Role::Gatekeeper;
  if (s == "follower") return Role::Follower;
  throw Error(ErrorCode::InvalidConfig, fmt::format("unknown role '{}'", s));
}

}  // namespace

void to_json(json& j, const CellRef& c) { j = json::array({c.column, c.row}); }
void from_json(const json& j, CellRef& c) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidCell, "cell must be [column, row]");
  c.column = j.at(0).get<std::size_t>();
  c.row = j.at(1).get<std::size_t>();
}

void to_json(json& j, const Interval& v) {
  j = {{"index", v.index}, {"start", format_timestamp(v.start)}, {"end", format_timestamp(v.end)}};
}
void from_json(const json& j, Interval& v) {
  v.index = j.at("index").get<std::size_t>();
  v.start = parse_timestamp(j.at("start").get<std::string>());
  v.end = parse_timestamp(j.at("end").get<std::string>());
}

void to_json(json& j, const Clustering& c) {
  json clusters = json::array();
  for (const auto& cl : c.clusters) clusters.push_back({{"center", optional_to_json(cl.center)}, {"members", cl.members}});
  j = {{"tau", c.tau}, {"interval", c.interval}, {"slice", c.slice}, {"clusters", std::move(clusters)}};
}
void from_json(const json& j, Clustering& c) {
  c.tau = j.at("tau").get<double>();
  c.interval = j.at("interval").get<std::size_t>();
  c.slice = j.at("slice").get<std::size_t>();
  c.clusters.clear();
  for (const auto& cl : j.at("clusters")) {
    c.clusters.push_back({optional_from_json<NodeIndex>(cl.at("center")), cl.at("members").get<std::vector<NodeIndex>>()});
  }
}

void to_json(json& j, const SimilarityEdge& e) { j = {{"from", e.from}, {"to", e.to}, {"sigma", e.sigma}}; }
void from_json(const json& j, SimilarityEdge& e) {
  e.from = j.at("from").get<CellRef>();
  e.to = j.at("to").get<CellRef>();
  e.sigma = j.at("sigma").get<double>();
}

void to_json(json& j, const ChangeReport& r) {
  json boundaries = json::array();
  for (const auto& b : r.boundaries) {
    boundaries.push_back({{"boundary", b.boundary},
                          {"max_sigma", b.max_sigma},
                          {"avg_sigma", b.avg_sigma},
                          {"gap", b.gap},
                          {"score", b.score}});
  }
  j = {{"boundaries", std::move(boundaries)}, {"ranking", r.ranking}};
}
void from_json(const json& j, ChangeReport& r) {
  r.boundaries.clear();
  for (const auto& b : j.at("boundaries")) {
    r.boundaries.push_back({b.at("boundary").get<std::size_t>(), b.at("max_sigma").get<double>(),
                            b.at("avg_sigma").get<double>(), b.at("gap").get<double>(), b.at("score").get<double>()});
  }
  r.ranking = j.at("ranking").get<std::vector<std::size_t>>();
}

void to_json(json& j, const ConsensusCommunity& c) {
  json chain = json::array();
  for (const auto& link : c.chain) chain.push_back({{"cell", link.cell}, {"cluster", link.cluster}});
  json support = json::array();
  for (const auto& s : c.support) support.push_back(json::array({s.node, s.fraction}));
  j = {{"members", c.members}, {"chain", std::move(chain)}, {"support", std::move(support)}};
}
void from_json(const json& j, ConsensusCommunity& c) {
  c.members = j.at("members").get<std::vector<NodeIndex>>();
  c.chain.clear();
  for (const auto& link : j.at("chain")) c.chain.push_back({link.at("cell").get<CellRef>(), link.at("cluster").get<std::size_t>()});
  c.support.clear();
  for (const auto& s : j.at("support")) c.support.push_back({s.at(0).get<NodeIndex>(), s.at(1).get<double>()});
}

void to_json(json& j, const HierarchyReport& h) {
  json nodes = json::array();
  for (const auto& e : h.nodes) {
    nodes.push_back({{"node", e.node},
                     {"parent", optional_to_json(e.parent)},
                     {"depth", optional_to_json(e.depth)},
                     {"delta", e.delta},
                     {"role", e.role ? json(std::string(to_string(*e.role))) : json(nullptr)}});
  }
  j = {{"mode", std::string(to_string(h.mode))},
       {"source", h.source},
       {"root", h.root},
       {"global_efficiency", h.global_efficiency},
       {"fell_back", h.fell_back},
       {"top_nodes", h.top_nodes},
       {"nodes", std::move(nodes)}};
}
void from_json(const json& j, HierarchyReport& h) {
  h.mode = parse_mode(j.at("mode").get<std::string>());
  h.source = j.at("source").get<std::string>();
  h.root = j.at("root").get<NodeIndex>();
  h.global_efficiency = j.at("global_efficiency").get<double>();
  h.fell_back = j.at("fell_back").get<bool>();
  h.top_nodes = j.at("top_nodes").get<std::vector<NodeIndex>>();
  h.nodes.clear();
  for (const auto& e : j.at("nodes")) {
    HierarchyEntry entry;
    entry.node = e.at("node").get<NodeIndex>();
    entry.parent = optional_from_json<NodeIndex>(e.at("parent"));
    entry.depth = optional_from_json<std::size_t>(e.at("depth"));
    entry.delta = e.at("delta").get<double>();
    if (!e.at("role").is_null()) entry.role = parse_role(e.at("role").get<std::string>());
    h.nodes.push_back(entry);
  }
}

void to_json(json& j, const GridSummary& g) {
  j = {{"alpha", g.alpha},
       {"omega", g.omega},
       {"axis", g.axis == RowAxis::Slices ? "slices" : "tau"},
       {"epsilon", g.epsilon},
       {"metric", std::string(to_string(g.metric))},
       {"weight_range", json::array({g.weight_range.first, g.weight_range.second})},
       {"cutoffs", g.cutoffs},
       {"taus", g.taus}};
}
void from_json(const json& j, GridSummary& g) {
  g.alpha = j.at("alpha").get<std::size_t>();
  g.omega = j.at("omega").get<std::size_t>();
  g.axis = parse_axis(j.at("axis").get<std::string>());
  g.epsilon = j.at("epsilon").get<std::string>();
  g.metric = parse_metric(j.at("metric").get<std::string>());
  g.weight_range = {j.at("weight_range").at(0).get<double>(), j.at("weight_range").at(1).get<double>()};
  g.cutoffs = j.at("cutoffs").get<std::vector<double>>();
  g.taus = j.at("taus").get<std::vector<double>>();
}

void to_json(json& j, const CellData& c) {
  json edges = json::array();
  for (const auto& e : c.edges) edges.push_back(json::array({e.u, e.v, e.weight}));
  j = {{"cell", c.cell}, {"interval", c.interval}, {"cutoff", c.cutoff}, {"edges", std::move(edges)},
       {"clustering", c.clustering}};
}
void from_json(const json& j, CellData& c) {
  c.cell = j.at("cell").get<CellRef>();
  c.interval = j.at("interval").get<Interval>();
  c.cutoff = j.at("cutoff").get<double>();
  c.edges.clear();
  for (const auto& e : j.at("edges")) c.edges.push_back({e.at(0).get<NodeIndex>(), e.at(1).get<NodeIndex>(), e.at(2).get<double>()});
  c.clustering = j.at("clustering").get<Clustering>();
}

void to_json(json& j, const AnalysisConfig& c) {
  j = {{"input", c.input_path},
       {"epsilon", c.epsilon},
       {"slices", c.omega},
       {"tau", c.tau},
       {"metric", std::string(to_string(c.metric))},
       {"mode", std::string(to_string(c.mode))},
       {"tau_grid", c.tau_grid},
       {"output", c.output_path},
       {"serve", optional_to_json(c.serve_port)},
       {"hierarchy_cell", optional_to_json(c.hierarchy_cell)},
       {"consensus_threshold", c.consensus_threshold},
       {"literal_min_tree", c.literal_min_tree}};
}
void from_json(const json& j, AnalysisConfig& c) {
  c.input_path = j.at("input").get<std::string>();
  c.epsilon = j.at("epsilon").get<std::string>();
  c.omega = j.at("slices").get<std::size_t>();
  c.tau = j.at("tau").get<double>();
  c.metric = parse_metric(j.at("metric").get<std::string>());
  c.mode = parse_mode(j.at("mode").get<std::string>());
  c.tau_grid = j.at("tau_grid").get<std::vector<double>>();
  c.output_path = j.at("output").get<std::string>();
  c.serve_port = optional_from_json<std::uint16_t>(j.at("serve"));
  c.hierarchy_cell = optional_from_json<CellRef>(j.at("hierarchy_cell"));
  c.consensus_threshold = j.at("consensus_threshold").get<double>();
  c.literal_min_tree = j.at("literal_min_tree").get<bool>();
}

void to_json(json& j, const AnalysisBundle& b) {
  json diagnostics = json::array();
  for (const auto& d : b.diagnostics) diagnostics.push_back({{"line", d.line}, {"reason", d.reason}});
  j = {{"config", b.config},
       {"nodes", b.nodes},
       {"grid", b.grid},
       {"cells", b.cells},
       {"similarity", b.similarity},
       {"changes", b.changes},
       {"path", b.path},
       {"consensus", b.consensus},
       {"hierarchy", optional_to_json(b.hierarchy)},
       {"diagnostics", std::move(diagnostics)},
       {"dropped_self_loops", b.dropped_self_loops},
       {"warnings", b.warnings}};
}
void from_json(const json& j, AnalysisBundle& b) {
  b.config = j.at("config").get<AnalysisConfig>();
  b.nodes = j.at("nodes").get<std::vector<std::string>>();
  b.grid = j.at("grid").get<GridSummary>();
  b.cells = j.at("cells").get<std::vector<CellData>>();
  b.similarity = j.at("similarity").get<std::vector<SimilarityEdge>>();
  b.changes = j.at("changes").get<ChangeReport>();
  b.path = j.at("path").get<std::vector<CellRef>>();
  b.consensus = j.at("consensus").get<std::vector<ConsensusCommunity>>();
  b.hierarchy = optional_from_json<HierarchyReport>(j.at("hierarchy"));
  b.diagnostics.clear();
  for (const auto& d : j.at("diagnostics")) b.diagnostics.push_back({d.at("line").get<std::size_t>(), d.at("reason").get<std::string>()});
  b.dropped_self_loops = j.at("dropped_self_loops").get<std::size_t>();
  b.warnings = j.at("warnings").get<std::vector<std::string>>();
}

std::string serialize_bundle(const AnalysisBundle& b) { return json(b).dump(1) + "\n"; }

AnalysisBundle deserialize_bundle(std::string_view text) {
  try {
    return json::parse(text).get<AnalysisBundle>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, fmt::format("invalid bundle JSON: {}", e.what()));
  }
}

}  // namespace dysnav
