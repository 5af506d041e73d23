#include "dysnav/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace dysnav {
namespace {

template <typename Fn>
auto step(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& e) {
    throw PipelineError(name, e);
  }
}

const SnapshotGraph& cell_graph(const SnapshotGrid& grid, const SimilarityGraph& sg, CellRef c) {
  return grid.at(c.column, sg.axis == RowAxis::TauGrid ? 0 : c.row);
}

HierarchyReport make_report(const HierarchyResult& r, std::span<const NodeIndex> global, HierarchyMode mode,
                            std::string source) {
  HierarchyReport rep;
  rep.mode = mode;
  rep.source = std::move(source);
  rep.root = global[r.tree.root];
  rep.global_efficiency = r.efficiency.global;
  rep.fell_back = r.selection.fell_back;
  for (NodeIndex v : r.selection.top_nodes) rep.top_nodes.push_back(global[v]);
  for (NodeIndex v = 0; v < global.size(); ++v) {
    HierarchyEntry e;
    e.node = global[v];
    if (r.tree.parent[v]) e.parent = global[*r.tree.parent[v]];
    e.depth = r.tree.depth[v];
    e.delta = r.efficiency.delta[v];
    if (!r.tree.roles.empty()) e.role = r.tree.roles[v];
    rep.nodes.push_back(e);
  }
  return rep;
}

}  // namespace

HierarchyMode parse_mode(std::string_view text) {
  if (text == "normal") return HierarchyMode::Normal;
  if (text == "ct" || text == "counter-terrorism") return HierarchyMode::CounterTerrorism;
  throw Error(ErrorCode::InvalidConfig, fmt::format("unknown hierarchy mode '{}'", text));
}

void validate(const AnalysisConfig& cfg) {
  parse_duration(cfg.epsilon);
  if (cfg.omega < 1) throw Error(ErrorCode::InvalidOmega, "number of slices must be at least 1");
  if (!(cfg.tau >= 0.0 && cfg.tau <= 1.0)) throw Error(ErrorCode::InvalidTau, fmt::format("tau {} outside [0, 1]", cfg.tau));
  for (std::size_t k = 0; k < cfg.tau_grid.size(); ++k) {
    if (!(cfg.tau_grid[k] >= 0.0 && cfg.tau_grid[k] <= 1.0)) throw Error(ErrorCode::InvalidTau, "tau grid entry outside [0, 1]");
    if (k > 0 && !(cfg.tau_grid[k] > cfg.tau_grid[k - 1])) {
      throw Error(ErrorCode::InvalidTau, "tau grid must be strictly increasing");
    }
  }
  if (!(cfg.consensus_threshold > 0.0 && cfg.consensus_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "consensus threshold must be in (0, 1]");
  }
}

std::pair<Graph, std::vector<NodeIndex>> consensus_graph(const SnapshotGrid& grid, const SimilarityGraph& sg,
                                                         std::span<const CellRef> path,
                                                         std::span<const ConsensusCommunity> communities) {
  std::set<NodeIndex> keep;
  for (const auto& c : communities) {
    if (c.members.size() >= 2) keep.insert(c.members.begin(), c.members.end());
  }
  std::vector<NodeIndex> global(keep.begin(), keep.end());
  std::vector<NodeIndex> local(grid.nodes.size(), static_cast<NodeIndex>(-1));
  for (NodeIndex k = 0; k < global.size(); ++k) local[global[k]] = k;
  std::vector<Edge> edges;
  for (const CellRef& c : path) {
    for (const Edge& e : cell_graph(grid, sg, c).graph.edges()) {
      if (local[e.u] != static_cast<NodeIndex>(-1) && local[e.v] != static_cast<NodeIndex>(-1)) {
        edges.push_back({local[e.u], local[e.v]});
      }
    }
  }
  return {Graph(global.size(), edges), std::move(global)};
}

Analysis Analysis::run(const AnalysisConfig& cfg) {
  std::ifstream in(cfg.input_path);
  if (!in) {
    throw PipelineError("ingest", Error(ErrorCode::Io, fmt::format("cannot open '{}'", cfg.input_path)));
  }
  return run(cfg, in);
}

Analysis Analysis::run(const AnalysisConfig& cfg, std::istream& input) {
  step("config", [&] { validate(cfg); });
  Analysis a;
  a.config_ = cfg;
  a.bundle_.config = cfg;

  auto parsed = step("ingest", [&] { return parse_records(input); });
  const auto dg = step("ingest", [&] { return build_dynamic_graph(std::move(parsed.records)); });
  a.bundle_.diagnostics = std::move(parsed.diagnostics);
  a.bundle_.dropped_self_loops = dg.dropped_self_loops;
  a.bundle_.nodes = dg.nodes;

  a.grid_ = step("discretize", [&] {
    auto grid = discretize(dg, parse_duration(cfg.epsilon), cfg.tau_grid.empty() ? cfg.omega : 1, cfg.metric);
    if (grid.alpha() < 2) {
      throw Error(ErrorCode::InvalidEpsilon,
                  fmt::format("epsilon {} yields a single interval; at least two are needed", cfg.epsilon));
    }
    return grid;
  });

  a.similarity_ = step("decompose", [&] {
    return cfg.tau_grid.empty() ? build_similarity_graph(a.grid_, cfg.tau) : build_similarity_graph(a.grid_, cfg.tau_grid);
  });

  auto& g = a.bundle_.grid;
  g.alpha = a.grid_.alpha();
  g.omega = a.similarity_.rows;
  g.axis = a.similarity_.axis;
  g.epsilon = format_duration(a.grid_.epsilon);
  g.metric = cfg.metric;
  g.weight_range = a.grid_.weight_range;
  g.cutoffs = a.grid_.cutoffs;

  a.refresh_from_similarity();
  return a;
}

void Analysis::refresh_from_similarity() {
  bundle_.grid.taus = similarity_.taus;
  bundle_.cells.clear();
  for (std::size_t i = 0; i < similarity_.columns; ++i) {
    for (std::size_t j = 0; j < similarity_.rows; ++j) {
      const SnapshotGraph& snap = cell_graph(grid_, similarity_, {i, j});
      CellData cell;
      cell.cell = {i, j};
      cell.interval = snap.interval;
      cell.cutoff = snap.cutoff;
      for (std::size_t k = 0; k < snap.weights.size(); ++k) {
        cell.edges.push_back({snap.graph.edges()[k].u, snap.graph.edges()[k].v, snap.weights[k]});
      }
      cell.clustering = similarity_.clustering({i, j});
      bundle_.cells.push_back(std::move(cell));
    }
  }
  bundle_.similarity = similarity_.edges;
  bundle_.changes = step("similarity", [&] { return detect_changes(similarity_); });
  refresh_selection(step("similarity", [&] { return best_full_path(similarity_); }));
}

void Analysis::refresh_selection(std::vector<CellRef> path) {
  bundle_.consensus = step("similarity", [&] {
    return consensus_communities(similarity_, path, config_.consensus_threshold);
  });
  bundle_.path = std::move(path);
  std::erase_if(bundle_.warnings, [](const std::string& w) { return w.starts_with("hierarchy:"); });

  Graph graph;
  std::vector<NodeIndex> global;
  std::string source = "consensus";
  if (config_.hierarchy_cell) {
    const CellRef c = *config_.hierarchy_cell;
    if (c.column >= similarity_.columns || c.row >= similarity_.rows) {
      throw PipelineError("hierarchy", Error(ErrorCode::InvalidCell, "hierarchy cell outside the grid"));
    }
    const Graph& snap = cell_graph(grid_, similarity_, c).graph;
    for (NodeIndex v = 0; v < snap.node_count(); ++v) {
      if (snap.degree(v) > 0) global.push_back(v);
    }
    graph = snap.induced(global);
    source = fmt::format("cell {},{}", c.column, c.row);
  } else {
    std::tie(graph, global) = consensus_graph(grid_, similarity_, bundle_.path, bundle_.consensus);
  }

  normal_.reset();
  counter_terrorism_.reset();
  if (graph.node_count() == 0) {
    bundle_.warnings.push_back("hierarchy: selected graph is empty; no hierarchy computed");
  } else {
    std::vector<std::string> ids;
    for (NodeIndex v : global) ids.push_back(bundle_.nodes[v]);
    const auto objective = config_.literal_min_tree ? TreeObjective::LiteralMinimum : TreeObjective::MaximizeImportance;
    const auto eff = delta_efficiency(graph);
    for (HierarchyMode mode : {HierarchyMode::Normal, HierarchyMode::CounterTerrorism}) {
      HierarchyResult r;
      r.efficiency = eff;
      r.tree_edges = spanning_tree(graph.node_count(), weight_edges(graph, eff, mode, objective));
      r.selection = detect_root(graph, eff, mode, ids);
      r.tree = orient_hierarchy(graph.node_count(), r.tree_edges, r.selection.root, mode, r.selection.top_nodes);
      auto report = make_report(r, global, mode, source);
      if (mode == HierarchyMode::Normal) {
        normal_ = std::move(report);
      } else {
        if (r.selection.fell_back && config_.mode == mode) {
          bundle_.warnings.push_back("hierarchy: no node shared by top-delta neighborhoods; used highest delta root");
        }
        counter_terrorism_ = std::move(report);
      }
    }
  }
  bundle_.hierarchy = hierarchy(config_.mode);
}

const std::optional<HierarchyReport>& Analysis::hierarchy(HierarchyMode mode) const {
  return mode == HierarchyMode::Normal ? normal_ : counter_terrorism_;
}

void Analysis::recluster(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidTau, fmt::format("tau {} outside [0, 1]", tau));
  if (similarity_.axis == RowAxis::TauGrid) {
    throw Error(ErrorCode::InvalidConfig, "recluster with a single tau is not available on a tau-grid axis");
  }
  similarity_ = build_similarity_graph(grid_, tau);
  config_.tau = tau;
  bundle_.config.tau = tau;
  refresh_from_similarity();
}

void Analysis::select_path(CellRef from, CellRef to) {
  refresh_selection(max_similarity_path(similarity_, from, to));
}

AnalysisBundle run_pipeline(const AnalysisConfig& cfg) { return Analysis::run(cfg).bundle(); }

AnalysisBundle run_pipeline(const AnalysisConfig& cfg, std::istream& input) { return Analysis::run(cfg, input).bundle(); }

}  // namespace dysnav
