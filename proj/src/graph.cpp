#include "dysnav/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace dysnav {

Graph::Graph(std::size_t node_count) : adjacency_(node_count) {}

Graph::Graph(std::size_t node_count, std::span<const Edge> edges) : adjacency_(node_count) {
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u == e.v) continue;
    if (e.u >= node_count || e.v >= node_count) throw std::out_of_range("edge endpoint outside vertex range");
    edges_.push_back(canonical(e.u, e.v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const Edge& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& list : adjacency_) best = std::max(best, list.size());
  return best;
}

bool Graph::has_edge(NodeIndex u, NodeIndex v) const {
  if (u >= node_count() || v >= node_count()) return false;
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

std::size_t Graph::edge_index(NodeIndex u, NodeIndex v) const {
  if (u == v) return npos;
  const Edge key = canonical(u, v);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return npos;
  return static_cast<std::size_t>(it - edges_.begin());
}

Graph Graph::induced(std::span<const NodeIndex> keep) const {
  std::vector<NodeIndex> remap(node_count(), static_cast<NodeIndex>(-1));
  for (std::size_t k = 0; k < keep.size(); ++k) remap[keep[k]] = static_cast<NodeIndex>(k);
  std::vector<Edge> kept;
  for (const Edge& e : edges_) {
    if (remap[e.u] != static_cast<NodeIndex>(-1) && remap[e.v] != static_cast<NodeIndex>(-1)) {
      kept.push_back({remap[e.u], remap[e.v]});
    }
  }
  return Graph(keep.size(), kept);
}

}  // namespace dysnav
