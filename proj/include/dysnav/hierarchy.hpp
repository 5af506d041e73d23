#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dysnav/graph.hpp"

namespace dysnav {

// Mean of 1/d(i, j) over ordered pairs of distinct vertices, with unreachable
// pairs contributing 0 and hop-count distances. Graphs with < 2 vertices give 0.
double network_efficiency(const Graph& g);

struct EfficiencyMap {
  double global = 0.0;
  std::vector<double> delta;  // Eff(G) - Eff(G without v), per vertex
};

EfficiencyMap delta_efficiency(const Graph& g);

enum class HierarchyMode { Normal, CounterTerrorism };

// Normal mode: Kruskal runs on -max(delta) so the kept tree favors important
// edges; LiteralMinimum runs it on +max(delta) instead.
enum class TreeObjective { MaximizeImportance, LiteralMinimum };

struct WeightedEdge {
  NodeIndex u = 0;
  NodeIndex v = 0;
  double cost = 0.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// Kruskal costs: Normal -> -max(delta_u, delta_v); CounterTerrorism -> |delta_u - delta_v|.
std::vector<WeightedEdge> weight_edges(const Graph& g, const EfficiencyMap& eff, HierarchyMode mode,
                                       TreeObjective objective = TreeObjective::MaximizeImportance);

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

// Minimum-cost spanning forest; ties broken by the (u, v) endpoint pair.
std::vector<Edge> spanning_tree(std::size_t node_count, std::span<const WeightedEdge> edges);

struct RootSelection {
  NodeIndex root = 0;
  std::vector<NodeIndex> top_nodes;  // counter-terrorism candidates, by delta desc
  bool fell_back = false;            // no shared neighbor; the normal rule was used
};

// Number of top-delta vertices examined in counter-terrorism mode.
std::size_t counter_terrorism_pool(std::size_t node_count);

// `ids` orders vertices for tie-breaks; defaults to vertex index order.
RootSelection detect_root(const Graph& g, const EfficiencyMap& eff, HierarchyMode mode,
                          std::span<const std::string> ids = {});

enum class Role { Leader, Gatekeeper, Follower };

std::string_view to_string(Role role);
std::string_view to_string(HierarchyMode mode);

struct HierarchyTree {
  NodeIndex root = 0;
  HierarchyMode mode = HierarchyMode::Normal;
  std::vector<std::optional<NodeIndex>> parent;  // unset for the root and unreached vertices
  std::vector<std::optional<std::size_t>> depth;  // unset for unreached vertices
  std::vector<std::optional<Role>> roles;         // counter-terrorism mode only

  bool spans(NodeIndex v) const { return depth.at(v).has_value(); }
  std::size_t height() const;

  friend bool operator==(const HierarchyTree&, const HierarchyTree&) = default;
};

// Breadth-first orientation away from `root`. `gatekeepers` are labeled in
// counter-terrorism mode. Throws RootNotInTree.
HierarchyTree orient_hierarchy(std::size_t node_count, std::span<const Edge> tree, NodeIndex root,
                               HierarchyMode mode, std::span<const NodeIndex> gatekeepers = {});

struct HierarchyResult {
  EfficiencyMap efficiency;
  RootSelection selection;
  std::vector<Edge> tree_edges;
  HierarchyTree tree;
};

// Whole chain: efficiency, weighting, spanning forest, root, orientation.
// Throws EmptyGraph.
HierarchyResult infer_hierarchy(const Graph& g, HierarchyMode mode, std::span<const std::string> ids = {},
                                TreeObjective objective = TreeObjective::MaximizeImportance);

}  // namespace dysnav
