#include "dysnav/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fmt/format.h>
#include <numeric>

#include "dysnav/error.hpp"
#include "parallel.hpp"

namespace dysnav {
namespace {

// Efficiency of g with vertex `skip` (if any) deleted.
double efficiency_without(const Graph& g, std::optional<NodeIndex> skip) {
  const std::size_t total = g.node_count();
  const std::size_t n = skip ? total - 1 : total;
  if (n < 2) return 0.0;

  std::vector<std::uint64_t> histogram(total + 1, 0);
  std::vector<std::size_t> dist(total);
  std::vector<NodeIndex> queue(total);
  constexpr auto kUnseen = static_cast<std::size_t>(-1);
  for (NodeIndex s = 0; s < total; ++s) {
    if (skip && s == *skip) continue;
    std::fill(dist.begin(), dist.end(), kUnseen);
    if (skip) dist[*skip] = 0;  // never entered
    dist[s] = 0;
    std::size_t head = 0;
    std::size_t tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      const NodeIndex u = queue[head++];
      for (NodeIndex w : g.neighbors(u)) {
        if (dist[w] != kUnseen) continue;
        dist[w] = dist[u] + 1;
        ++histogram[dist[w]];
        queue[tail++] = w;
      }
    }
  }
  double sum = 0.0;
  for (std::size_t d = 1; d < histogram.size(); ++d) {
    if (histogram[d] != 0) sum += static_cast<double>(histogram[d]) / static_cast<double>(d);
  }
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

bool id_less(std::span<const std::string> ids, NodeIndex a, NodeIndex b) {
  if (ids.empty()) return a < b;
  return ids[a] < ids[b];
}

}  // namespace

double network_efficiency(const Graph& g) { return efficiency_without(g, std::nullopt); }

EfficiencyMap delta_efficiency(const Graph& g) {
  EfficiencyMap eff;
  eff.global = network_efficiency(g);
  eff.delta.resize(g.node_count());
  detail::parallel_for(g.node_count(), [&](std::size_t v) {
    eff.delta[v] = eff.global - efficiency_without(g, static_cast<NodeIndex>(v));
  });
  return eff;
}

std::vector<WeightedEdge> weight_edges(const Graph& g, const EfficiencyMap& eff, HierarchyMode mode,
                                       TreeObjective objective) {
  std::vector<WeightedEdge> out;
  out.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    const double a = eff.delta.at(e.u);
    const double b = eff.delta.at(e.v);
    double cost = 0.0;
    if (mode == HierarchyMode::CounterTerrorism) {
      cost = std::abs(a - b);
    } else {
      cost = std::max(a, b);
      if (objective == TreeObjective::MaximizeImportance) cost = -cost;
    }
    out.push_back({e.u, e.v, cost});
  }
  return out;
}

DisjointSet::DisjointSet(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSet::find(std::size_t x) {
  while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
  return x;
}

bool DisjointSet::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

std::vector<Edge> spanning_tree(std::size_t node_count, std::span<const WeightedEdge> edges) {
  std::vector<WeightedEdge> sorted;
  sorted.reserve(edges.size());
  for (const auto& e : edges) {
    const Edge c = canonical(e.u, e.v);
    sorted.push_back({c.u, c.v, e.cost});
  }
  std::sort(sorted.begin(), sorted.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  DisjointSet sets(node_count);
  std::vector<Edge> tree;
  for (const auto& e : sorted) {
    if (e.u != e.v && sets.unite(e.u, e.v)) tree.push_back({e.u, e.v});
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

std::size_t counter_terrorism_pool(std::size_t node_count) {
  const auto scaled = static_cast<std::size_t>(std::floor(0.03 * static_cast<double>(node_count)));
  return std::min(node_count, std::max<std::size_t>(2, scaled));
}

RootSelection detect_root(const Graph& g, const EfficiencyMap& eff, HierarchyMode mode,
                          std::span<const std::string> ids) {
  const std::size_t n = g.node_count();
  if (n == 0) throw Error(ErrorCode::EmptyGraph, "cannot pick a root in an empty graph");

  std::vector<NodeIndex> by_delta(n);
  std::iota(by_delta.begin(), by_delta.end(), NodeIndex{0});
  std::sort(by_delta.begin(), by_delta.end(), [&](NodeIndex a, NodeIndex b) {
    if (eff.delta[a] != eff.delta[b]) return eff.delta[a] > eff.delta[b];
    return id_less(ids, a, b);
  });

  RootSelection sel;
  sel.root = by_delta.front();
  if (mode == HierarchyMode::Normal) return sel;

  const std::size_t k = counter_terrorism_pool(n);
  sel.top_nodes.assign(by_delta.begin(), by_delta.begin() + static_cast<std::ptrdiff_t>(k));

  std::vector<std::size_t> count(n, 0);
  std::vector<char> mark(n, 0);
  for (std::size_t a = 0; a < k; ++a) {
    for (NodeIndex w : g.neighbors(sel.top_nodes[a])) mark[w] = 1;
    for (std::size_t b = a + 1; b < k; ++b) {
      for (NodeIndex w : g.neighbors(sel.top_nodes[b])) {
        if (mark[w]) ++count[w];
      }
    }
    for (NodeIndex w : g.neighbors(sel.top_nodes[a])) mark[w] = 0;
  }

  std::optional<NodeIndex> boss;
  for (NodeIndex w = 0; w < n; ++w) {
    if (count[w] == 0) continue;
    if (!boss || count[w] > count[*boss] ||
        (count[w] == count[*boss] &&
         (eff.delta[w] < eff.delta[*boss] || (eff.delta[w] == eff.delta[*boss] && id_less(ids, w, *boss))))) {
      boss = w;
    }
  }
  if (boss) {
    sel.root = *boss;
  } else {
    sel.fell_back = true;
  }
  return sel;
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Leader: return "leader";
    case Role::Gatekeeper: return "gatekeeper";
    case Role::Follower: return "follower";
  }
  return "follower";
}

std::string_view to_string(HierarchyMode mode) {
  return mode == HierarchyMode::Normal ? "normal" : "ct";
}

std::size_t HierarchyTree::height() const {
  std::size_t h = 0;
  for (const auto& d : depth) {
    if (d) h = std::max(h, *d);
  }
  return h;
}

HierarchyTree orient_hierarchy(std::size_t node_count, std::span<const Edge> tree, NodeIndex root,
                               HierarchyMode mode, std::span<const NodeIndex> gatekeepers) {
  if (root >= node_count) throw Error(ErrorCode::RootNotInTree, fmt::format("root {} not among {} vertices", root, node_count));
  const Graph forest(node_count, tree);
  if (forest.edge_count() != tree.size()) {
    throw Error(ErrorCode::RootNotInTree, "tree edges contain loops or duplicates");
  }

  HierarchyTree h;
  h.root = root;
  h.mode = mode;
  h.parent.assign(node_count, std::nullopt);
  h.depth.assign(node_count, std::nullopt);
  h.depth[root] = 0;
  std::deque<NodeIndex> queue{root};
  while (!queue.empty()) {
    const NodeIndex u = queue.front();
    queue.pop_front();
    for (NodeIndex w : forest.neighbors(u)) {
      if (h.depth[w]) continue;
      h.depth[w] = *h.depth[u] + 1;
      h.parent[w] = u;
      queue.push_back(w);
    }
  }

  if (mode == HierarchyMode::CounterTerrorism) {
    h.roles.assign(node_count, std::nullopt);
    for (NodeIndex v = 0; v < node_count; ++v) {
      if (h.depth[v]) h.roles[v] = Role::Follower;
    }
    for (NodeIndex v : gatekeepers) {
      if (v < node_count && h.depth[v]) h.roles[v] = Role::Gatekeeper;
    }
    h.roles[root] = Role::Leader;
  }
  return h;
}

HierarchyResult infer_hierarchy(const Graph& g, HierarchyMode mode, std::span<const std::string> ids,
                                TreeObjective objective) {
  if (g.node_count() == 0) throw Error(ErrorCode::EmptyGraph, "hierarchy needs a non-empty graph");
  HierarchyResult r;
  r.efficiency = delta_efficiency(g);
  const auto weighted = weight_edges(g, r.efficiency, mode, objective);
  r.tree_edges = spanning_tree(g.node_count(), weighted);
  r.selection = detect_root(g, r.efficiency, mode, ids);
  r.tree = orient_hierarchy(g.node_count(), r.tree_edges, r.selection.root, mode, r.selection.top_nodes);
  return r;
}

}  // namespace dysnav
