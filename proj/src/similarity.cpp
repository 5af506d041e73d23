#include "dysnav/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numeric>

#include "dysnav/error.hpp"
#include "parallel.hpp"

namespace dysnav {
namespace {

std::size_t intersection_size(std::span<const NodeIndex> a, std::span<const NodeIndex> b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

double rho_from_overlap(std::size_t common, std::size_t size_a, std::size_t size_b) {
  return static_cast<double>(common) / std::sqrt(static_cast<double>(size_a) * static_cast<double>(size_b));
}

void require_nonempty(const Clustering& c) {
  if (c.clusters.empty()) throw Error(ErrorCode::EmptyClustering, "clustering has no clusters");
  for (const auto& cl : c.clusters) {
    if (cl.members.empty()) throw Error(ErrorCode::EmptyCluster, "cluster has no members");
  }
}

// node -> indices of clusters containing it
std::vector<std::vector<std::size_t>> membership(const Clustering& c) {
  NodeIndex max_node = 0;
  for (const auto& cl : c.clusters) max_node = std::max(max_node, cl.members.back());
  std::vector<std::vector<std::size_t>> index(static_cast<std::size_t>(max_node) + 1);
  for (std::size_t k = 0; k < c.clusters.size(); ++k) {
    for (NodeIndex v : c.clusters[k].members) index[v].push_back(k);
  }
  return index;
}

// For each cluster of `to`, overlap counts with every cluster of `from`
// touching it; calls visit(to_index, from_index, overlap).
template <typename Visit>
void for_each_overlap(const Clustering& from, const Clustering& to, Visit&& visit) {
  const auto index = membership(from);
  std::vector<std::size_t> counts(from.clusters.size(), 0);
  std::vector<std::size_t> touched;
  for (std::size_t b = 0; b < to.clusters.size(); ++b) {
    touched.clear();
    for (NodeIndex v : to.clusters[b].members) {
      if (v >= index.size()) continue;
      for (std::size_t a : index[v]) {
        if (counts[a]++ == 0) touched.push_back(a);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::size_t a : touched) {
      visit(b, a, counts[a]);
      counts[a] = 0;
    }
  }
}

// For each cluster of `to`, the best matching cluster of `from`: highest rho,
// then larger size, then first index. Unmatched (no overlap) entries are npos.
std::vector<std::size_t> best_matches(const Clustering& from, const Clustering& to) {
  constexpr auto npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> best(to.clusters.size(), npos);
  std::vector<double> best_rho(to.clusters.size(), 0.0);
  for_each_overlap(from, to, [&](std::size_t b, std::size_t a, std::size_t common) {
    const double r = rho_from_overlap(common, from.clusters[a].members.size(), to.clusters[b].members.size());
    const bool better = best[b] == npos || r > best_rho[b] ||
                        (r == best_rho[b] && from.clusters[a].members.size() > from.clusters[best[b]].members.size());
    if (better) {
      best[b] = a;
      best_rho[b] = r;
    }
  });
  return best;
}

void check_cell(const SimilarityGraph& sg, CellRef c) {
  if (c.column >= sg.columns || c.row >= sg.rows) {
    throw Error(ErrorCode::InvalidCell, fmt::format("cell ({}, {}) outside {}x{} grid", c.column, c.row, sg.columns,
                                                    sg.rows));
  }
}

// Forward dynamic program over columns [first, last]. `start_score` gives the
// initial value per row (-inf excludes a row).
std::vector<CellRef> best_path(const SimilarityGraph& sg, std::size_t first, std::size_t last,
                               std::vector<double> score, std::optional<std::size_t> end_row) {
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::size_t>> pred(last - first + 1, std::vector<std::size_t>(sg.rows, 0));
  for (std::size_t c = first; c < last; ++c) {
    std::vector<double> next(sg.rows, kNone);
    auto& p = pred[c + 1 - first];
    for (std::size_t k = 0; k < sg.rows; ++k) {
      for (std::size_t j = 0; j < sg.rows; ++j) {
        if (score[j] == kNone) continue;
        const double cand = score[j] + sg.sigma(c, j, k);
        if (cand > next[k]) {
          next[k] = cand;
          p[k] = j;
        }
      }
    }
    score = std::move(next);
  }
  std::size_t row = 0;
  if (end_row) {
    row = *end_row;
  } else {
    for (std::size_t k = 1; k < sg.rows; ++k) {
      if (score[k] > score[row]) row = k;
    }
  }
  std::vector<CellRef> path(last - first + 1);
  for (std::size_t c = last + 1; c-- > first;) {
    path[c - first] = {c, row};
    row = pred[c - first][row];
  }
  return path;
}

}  // namespace

double cluster_representativeness(std::span<const NodeIndex> a, std::span<const NodeIndex> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyCluster, "cluster has no members");
  return rho_from_overlap(intersection_size(a, b), a.size(), b.size());
}

double directed_clustering_representativeness(const Clustering& from, const Clustering& to) {
  require_nonempty(from);
  require_nonempty(to);
  std::vector<double> best(to.clusters.size(), 0.0);
  for_each_overlap(from, to, [&](std::size_t b, std::size_t a, std::size_t common) {
    best[b] = std::max(best[b], rho_from_overlap(common, from.clusters[a].members.size(), to.clusters[b].members.size()));
  });
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t b = 0; b < to.clusters.size(); ++b) {
    const auto size = static_cast<double>(to.clusters[b].members.size());
    weighted += best[b] * size;
    total += size;
  }
  return weighted / total;
}

double clustering_representativeness(const Clustering& a, const Clustering& b) {
  return std::sqrt(directed_clustering_representativeness(a, b) * directed_clustering_representativeness(b, a));
}

std::vector<SimilarityEdge> similarity_edges(const std::vector<std::vector<Clustering>>& clusterings) {
  const std::size_t columns = clusterings.size();
  if (columns < 2) throw Error(ErrorCode::SingleColumn, "similarity needs at least two time columns");
  const std::size_t rows = clusterings.front().size();
  std::vector<SimilarityEdge> edges((columns - 1) * rows * rows);
  detail::parallel_for(edges.size(), [&](std::size_t idx) {
    const std::size_t i = idx / (rows * rows);
    const std::size_t j = idx / rows % rows;
    const std::size_t k = idx % rows;
    edges[idx] = {{i, j}, {i + 1, k}, clustering_representativeness(clusterings[i][j], clusterings[i + 1][k])};
  });
  return edges;
}

SimilarityGraph build_similarity_graph(const SnapshotGrid& grid, double tau) {
  if (grid.alpha() < 2) throw Error(ErrorCode::SingleColumn, "similarity needs at least two time columns");
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidTau, fmt::format("tau {} outside [0, 1]", tau));
  SimilarityGraph sg;
  sg.columns = grid.alpha();
  sg.rows = grid.omega;
  sg.axis = RowAxis::Slices;
  sg.taus.assign(sg.rows, tau);
  sg.clusterings.assign(sg.columns, std::vector<Clustering>(sg.rows));
  detail::parallel_for(sg.columns * sg.rows, [&](std::size_t idx) {
    const std::size_t i = idx / sg.rows;
    const std::size_t j = idx % sg.rows;
    Clustering c = extract_communities(grid.at(i, j).graph, tau);
    c.interval = i;
    c.slice = j;
    sg.clusterings[i][j] = std::move(c);
  });
  sg.edges = similarity_edges(sg.clusterings);
  return sg;
}

SimilarityGraph build_similarity_graph(const SnapshotGrid& grid, std::span<const double> tau_grid) {
  if (grid.alpha() < 2) throw Error(ErrorCode::SingleColumn, "similarity needs at least two time columns");
  if (tau_grid.empty()) throw Error(ErrorCode::InvalidTau, "tau grid is empty");
  for (std::size_t k = 0; k < tau_grid.size(); ++k) {
    if (!(tau_grid[k] >= 0.0 && tau_grid[k] <= 1.0)) throw Error(ErrorCode::InvalidTau, "tau grid entry outside [0, 1]");
    if (k > 0 && !(tau_grid[k] > tau_grid[k - 1])) throw Error(ErrorCode::InvalidTau, "tau grid must be increasing");
  }
  SimilarityGraph sg;
  sg.columns = grid.alpha();
  sg.rows = tau_grid.size();
  sg.axis = RowAxis::TauGrid;
  sg.taus.assign(tau_grid.begin(), tau_grid.end());
  sg.clusterings.assign(sg.columns, std::vector<Clustering>(sg.rows));
  detail::parallel_for(sg.columns, [&](std::size_t i) {
    const Graph& g = grid.at(i, 0).graph;
    const StrengthMap strengths = compute_strengths(g);
    for (std::size_t j = 0; j < sg.rows; ++j) {
      Clustering c = extract_communities(g, strengths, tau_grid[j]);
      c.interval = i;
      c.slice = 0;
      sg.clusterings[i][j] = std::move(c);
    }
  });
  sg.edges = similarity_edges(sg.clusterings);
  return sg;
}

ChangeReport detect_changes(std::span<const SimilarityEdge> edges, std::size_t columns) {
  ChangeReport report;
  if (columns < 2) return report;
  std::vector<std::vector<double>> per_boundary(columns - 1);
  for (const auto& e : edges) {
    if (e.from.column + 1 < columns) per_boundary[e.from.column].push_back(e.sigma);
  }
  for (std::size_t i = 0; i + 1 < columns; ++i) {
    auto& values = per_boundary[i];
    // Sorted summation keeps the mean independent of edge order.
    std::sort(values.begin(), values.end());
    BoundaryChange b;
    b.boundary = i;
    if (!values.empty()) {
      b.max_sigma = values.back();
      b.avg_sigma = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    }
    b.gap = b.max_sigma - b.avg_sigma;
    b.score = 1.0 - b.max_sigma;
    report.boundaries.push_back(b);
  }
  report.ranking.resize(report.boundaries.size());
  std::iota(report.ranking.begin(), report.ranking.end(), std::size_t{0});
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = report.boundaries[a];
    const auto& y = report.boundaries[b];
    if (x.score != y.score) return x.score > y.score;
    return x.gap > y.gap;
  });
  return report;
}

ChangeReport detect_changes(const SimilarityGraph& sg) { return detect_changes(sg.edges, sg.columns); }

std::vector<CellRef> max_similarity_path(const SimilarityGraph& sg, CellRef from, CellRef to) {
  check_cell(sg, from);
  check_cell(sg, to);
  if (from.column >= to.column) {
    throw Error(ErrorCode::NotForwardInTime,
                fmt::format("path must move forward in time ({} -> {})", from.column, to.column));
  }
  std::vector<double> start(sg.rows, -std::numeric_limits<double>::infinity());
  start[from.row] = 0.0;
  return best_path(sg, from.column, to.column, std::move(start), to.row);
}

std::vector<CellRef> best_full_path(const SimilarityGraph& sg) {
  if (sg.columns < 2) throw Error(ErrorCode::SingleColumn, "similarity needs at least two time columns");
  return best_path(sg, 0, sg.columns - 1, std::vector<double>(sg.rows, 0.0), std::nullopt);
}

double path_similarity(const SimilarityGraph& sg, std::span<const CellRef> path) {
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < path.size(); ++p) total += sg.sigma(path[p].column, path[p].row, path[p + 1].row);
  return total;
}

std::vector<ConsensusCommunity> consensus_communities(const SimilarityGraph& sg, std::span<const CellRef> path,
                                                      double threshold) {
  for (std::size_t p = 0; p < path.size(); ++p) {
    check_cell(sg, path[p]);
    if (p > 0 && path[p].column != path[p - 1].column + 1) {
      throw Error(ErrorCode::InvalidCell, "path cells must be in consecutive columns");
    }
  }

  std::vector<std::size_t> offset(path.size() + 1, 0);
  for (std::size_t p = 0; p < path.size(); ++p) offset[p + 1] = offset[p] + sg.clustering(path[p]).size();

  std::vector<std::size_t> parent(offset.back());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  constexpr auto npos = static_cast<std::size_t>(-1);
  for (std::size_t p = 0; p + 1 < path.size(); ++p) {
    const Clustering& earlier = sg.clustering(path[p]);
    const Clustering& later = sg.clustering(path[p + 1]);
    const auto backward = best_matches(earlier, later);
    for (std::size_t b = 0; b < backward.size(); ++b) {
      if (backward[b] != npos) unite(offset[p] + backward[b], offset[p + 1] + b);
    }
    const auto forward = best_matches(later, earlier);
    for (std::size_t a = 0; a < forward.size(); ++a) {
      if (forward[a] != npos) unite(offset[p] + a, offset[p + 1] + forward[a]);
    }
  }

  std::vector<std::vector<ChainLink>> chains(parent.size());
  for (std::size_t p = 0; p < path.size(); ++p) {
    for (std::size_t k = 0; k < sg.clustering(path[p]).size(); ++k) {
      chains[find(offset[p] + k)].push_back({path[p], k});
    }
  }

  std::vector<ConsensusCommunity> out;
  for (auto& chain : chains) {
    if (chain.empty()) continue;
    std::vector<std::pair<NodeIndex, std::size_t>> seen;  // (node, column) pairs, deduplicated below
    for (const auto& link : chain) {
      for (NodeIndex v : sg.clustering(link.cell).clusters[link.cluster].members) seen.emplace_back(v, link.cell.column);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    std::size_t length = 0;
    {
      std::vector<std::size_t> cols;
      for (const auto& link : chain) cols.push_back(link.cell.column);
      std::sort(cols.begin(), cols.end());
      length = static_cast<std::size_t>(std::unique(cols.begin(), cols.end()) - cols.begin());
    }
    ConsensusCommunity community;
    community.chain = std::move(chain);
    for (std::size_t k = 0; k < seen.size();) {
      std::size_t m = k;
      while (m < seen.size() && seen[m].first == seen[k].first) ++m;
      const double fraction = static_cast<double>(m - k) / static_cast<double>(length);
      community.support.push_back({seen[k].first, fraction});
      if (fraction >= threshold) community.members.push_back(seen[k].first);
      k = m;
    }
    if (!community.members.empty()) out.push_back(std::move(community));
  }
  return out;
}

}  // namespace dysnav
