#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dysnav/decompose.hpp"
#include "dysnav/discretize.hpp"

namespace dysnav {

// Geometric mean of |a ∩ b| / |b| and |a ∩ b| / |a|; inputs sorted.
// Throws EmptyCluster.
double cluster_representativeness(std::span<const NodeIndex> a, std::span<const NodeIndex> b);

// Size-weighted mean over clusters of `to` of their best representative in `from`.
double directed_clustering_representativeness(const Clustering& from, const Clustering& to);

// Symmetric similarity sigma in [0, 1]. Throws EmptyClustering.
double clustering_representativeness(const Clustering& a, const Clustering& b);

struct CellRef {
  std::size_t column = 0;
  std::size_t row = 0;

  friend bool operator==(const CellRef&, const CellRef&) = default;
  friend auto operator<=>(const CellRef&, const CellRef&) = default;
};

struct SimilarityEdge {
  CellRef from;
  CellRef to;
  double sigma = 0.0;

  friend bool operator==(const SimilarityEdge&, const SimilarityEdge&) = default;
};

// What the grid's second axis indexes: weight slices clustered at one tau, or
// a list of taus applied to the unfiltered snapshot.
enum class RowAxis { Slices, TauGrid };

struct SimilarityGraph {
  std::size_t columns = 0;
  std::size_t rows = 0;
  RowAxis axis = RowAxis::Slices;
  std::vector<double> taus;  // one per row (repeated value in Slices mode)
  std::vector<std::vector<Clustering>> clusterings;  // [column][row]
  std::vector<SimilarityEdge> edges;  // ordered by (column, from row, to row)

  const Clustering& clustering(CellRef c) const { return clusterings.at(c.column).at(c.row); }
  double sigma(std::size_t column, std::size_t from_row, std::size_t to_row) const {
    return edges[(column * rows + from_row) * rows + to_row].sigma;
  }
};

// Throws SingleColumn when the grid has fewer than two intervals.
SimilarityGraph build_similarity_graph(const SnapshotGrid& grid, double tau);
SimilarityGraph build_similarity_graph(const SnapshotGrid& grid, std::span<const double> tau_grid);

// Similarity edges recomputed from already clustered cells.
std::vector<SimilarityEdge> similarity_edges(const std::vector<std::vector<Clustering>>& clusterings);

struct BoundaryChange {
  std::size_t boundary = 0;  // between column i and i + 1
  double max_sigma = 0.0;
  double avg_sigma = 0.0;
  double gap = 0.0;
  double score = 0.0;  // 1 - max_sigma

  friend bool operator==(const BoundaryChange&, const BoundaryChange&) = default;
};

struct ChangeReport {
  std::vector<BoundaryChange> boundaries;  // by boundary index
  std::vector<std::size_t> ranking;        // boundary indices, most changed first

  friend bool operator==(const ChangeReport&, const ChangeReport&) = default;
};

ChangeReport detect_changes(std::span<const SimilarityEdge> edges, std::size_t columns);
ChangeReport detect_changes(const SimilarityGraph& sg);

// One cell per column from `from` to `to` maximizing the summed sigma.
// Throws NotForwardInTime or InvalidCell.
std::vector<CellRef> max_similarity_path(const SimilarityGraph& sg, CellRef from, CellRef to);

// Best path spanning every column, free start and end rows.
std::vector<CellRef> best_full_path(const SimilarityGraph& sg);

double path_similarity(const SimilarityGraph& sg, std::span<const CellRef> path);

struct ChainLink {
  CellRef cell;
  std::size_t cluster = 0;

  friend bool operator==(const ChainLink&, const ChainLink&) = default;
};

struct NodeSupport {
  NodeIndex node = 0;
  double fraction = 0.0;

  friend bool operator==(const NodeSupport&, const NodeSupport&) = default;
};

struct ConsensusCommunity {
  std::vector<NodeIndex> members;
  std::vector<ChainLink> chain;
  std::vector<NodeSupport> support;  // every node seen in the chain

  friend bool operator==(const ConsensusCommunity&, const ConsensusCommunity&) = default;
};

inline constexpr double kDefaultConsensusThreshold = 0.5;

std::vector<ConsensusCommunity> consensus_communities(const SimilarityGraph& sg, std::span<const CellRef> path,
                                                      double threshold = kDefaultConsensusThreshold);

}  // namespace dysnav
