#include "dysnav/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

#include "dysnav/error.hpp"

namespace dysnav {
namespace {

// Marks N(u) in `mark`, counts cycles through (u, v), then clears the marks.
CycleCounts count_cycles(const Graph& g, NodeIndex u, NodeIndex v, std::vector<char>& mark, std::uint64_t& ops) {
  for (NodeIndex y : g.neighbors(u)) mark[y] = 1;
  mark[v] = 0;

  std::uint64_t common = 0;
  for (NodeIndex x : g.neighbors(v)) {
    if (x != u && mark[x]) ++common;
  }
  const std::uint64_t only_u = g.degree(u) - 1 - common;
  const std::uint64_t only_v = g.degree(v) - 1 - common;

  // 4-cycles u-v-x-y-u: x in N(v)\{u}, y in N(u)\{v}, x ~ y.
  std::uint64_t squares = 0;
  for (NodeIndex x : g.neighbors(v)) {
    if (x == u) continue;
    for (NodeIndex y : g.neighbors(x)) {
      ++ops;
      if (mark[y]) ++squares;
    }
  }
  for (NodeIndex y : g.neighbors(u)) mark[y] = 0;

  CycleCounts c;
  c.cycles = common + squares;
  const std::uint64_t max_squares =
      only_u * only_v + common * only_u + common * only_v + (common > 0 ? common * (common - 1) : 0);
  c.max_cycles = common + max_squares;
  return c;
}

void require_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidTau, fmt::format("tau {} outside [0, 1]", tau));
}

}  // namespace

CycleCounts edge_cycle_counts(const Graph& g, NodeIndex u, NodeIndex v) {
  if (!g.has_edge(u, v)) throw Error(ErrorCode::EdgeNotPresent, fmt::format("edge ({}, {}) not in graph", u, v));
  std::vector<char> mark(g.node_count(), 0);
  std::uint64_t ops = 0;
  return count_cycles(g, u, v, mark, ops);
}

double edge_strength(const Graph& g, NodeIndex u, NodeIndex v) { return edge_cycle_counts(g, u, v).strength(); }

StrengthMap compute_strengths(const Graph& g) {
  StrengthMap s;
  s.edge_strength.reserve(g.edge_count());
  std::vector<char> mark(g.node_count(), 0);
  for (const Edge& e : g.edges()) s.edge_strength.push_back(count_cycles(g, e.u, e.v, mark, s.operations).strength());

  std::vector<double> sum(g.node_count(), 0.0);
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    sum[g.edges()[k].u] += s.edge_strength[k];
    sum[g.edges()[k].v] += s.edge_strength[k];
  }
  s.vertex_strength.resize(g.node_count(), 0.0);
  for (NodeIndex u = 0; u < g.node_count(); ++u) {
    if (g.degree(u) > 0) s.vertex_strength[u] = sum[u] / static_cast<double>(g.degree(u));
  }
  return s;
}

double vertex_strength(const Graph& g, NodeIndex u) {
  if (u >= g.node_count()) throw Error(ErrorCode::NodeNotPresent, fmt::format("node {} not in graph", u));
  if (g.degree(u) == 0) return 0.0;
  double sum = 0.0;
  for (NodeIndex v : g.neighbors(u)) sum += edge_strength(g, u, v);
  return sum / static_cast<double>(g.degree(u));
}

std::vector<NodeIndex> extract_centers(const Graph& g, const StrengthMap& strengths) {
  std::vector<NodeIndex> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    if (strengths.vertex_strength[a] != strengths.vertex_strength[b]) {
      return strengths.vertex_strength[a] > strengths.vertex_strength[b];
    }
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    return a < b;
  });

  std::vector<char> removed(g.node_count(), 0);
  std::vector<NodeIndex> centers;
  for (NodeIndex u : order) {
    if (removed[u]) continue;
    centers.push_back(u);
    removed[u] = 1;
    for (NodeIndex v : g.neighbors(u)) removed[v] = 1;
  }
  return centers;
}

std::vector<NodeIndex> extract_centers(const Graph& g) { return extract_centers(g, compute_strengths(g)); }

Clustering extract_communities(const Graph& g, double tau) {
  require_tau(tau);
  return extract_communities(g, compute_strengths(g), tau);
}

Clustering extract_communities(const Graph& g, const StrengthMap& strengths, double tau) {
  require_tau(tau);
  Clustering out;
  out.tau = tau;
  std::vector<char> covered(g.node_count(), 0);
  for (NodeIndex u : extract_centers(g, strengths)) {
    Cluster c;
    c.center = u;
    c.members.push_back(u);
    covered[u] = 1;
    for (NodeIndex v : g.neighbors(u)) {
      if (strengths.edge_strength[g.edge_index(u, v)] >= tau) {
        c.members.push_back(v);
        covered[v] = 1;
      }
    }
    std::sort(c.members.begin(), c.members.end());
    out.clusters.push_back(std::move(c));
  }
  for (NodeIndex u = 0; u < g.node_count(); ++u) {
    if (!covered[u]) out.clusters.push_back(Cluster{std::nullopt, {u}});
  }
  return out;
}

}  // namespace dysnav
