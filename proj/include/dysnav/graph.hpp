#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace dysnav {

using NodeIndex = std::uint32_t;

struct Edge {
  NodeIndex u;
  NodeIndex v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple undirected graph over the vertex range [0, n). Edges are stored
// canonically (u < v) in lexicographic order; adjacency lists are sorted.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t node_count);

  // Self-loops and duplicate pairs are ignored; endpoint order is irrelevant.
  Graph(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const NodeIndex> neighbors(NodeIndex u) const { return adjacency_[u]; }
  std::size_t degree(NodeIndex u) const { return adjacency_[u].size(); }
  std::size_t max_degree() const;

  bool has_edge(NodeIndex u, NodeIndex v) const;

  // Position of {u, v} in edges(), or npos.
  std::size_t edge_index(NodeIndex u, NodeIndex v) const;

  // Induced subgraph on `keep` (ascending); vertex k of the result is keep[k].
  Graph induced(std::span<const NodeIndex> keep) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const Graph& a, const Graph& b) { return a.edges_ == b.edges_ && a.node_count() == b.node_count(); }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeIndex>> adjacency_;
};

inline Edge canonical(NodeIndex a, NodeIndex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace dysnav
