#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dysnav/graph.hpp"

namespace dysnav {

// Cycle counts behind the strength of one edge.
struct CycleCounts {
  std::uint64_t cycles = 0;      // distinct 3- and 4-cycles through the edge
  std::uint64_t max_cycles = 0;  // most such cycles the neighborhood allows

  double strength() const {
    return max_cycles == 0 ? 0.0 : static_cast<double>(cycles) / static_cast<double>(max_cycles);
  }
};

CycleCounts edge_cycle_counts(const Graph& g, NodeIndex u, NodeIndex v);

// Strength in [0, 1]; throws EdgeNotPresent.
double edge_strength(const Graph& g, NodeIndex u, NodeIndex v);

struct StrengthMap {
  std::vector<double> edge_strength;    // parallel to Graph::edges()
  std::vector<double> vertex_strength;  // mean of incident edge strengths, 0 if isolated
  std::uint64_t operations = 0;         // inner-loop steps spent counting cycles
};

StrengthMap compute_strengths(const Graph& g);

// Throws NodeNotPresent.
double vertex_strength(const Graph& g, NodeIndex u);

// Greedy maximal independent set over vertices sorted by
// (strength desc, degree desc, index asc).
std::vector<NodeIndex> extract_centers(const Graph& g, const StrengthMap& strengths);
std::vector<NodeIndex> extract_centers(const Graph& g);

struct Cluster {
  std::optional<NodeIndex> center;  // unset for vertices no ball reached
  std::vector<NodeIndex> members;   // sorted

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct Clustering {
  std::vector<Cluster> clusters;
  double tau = 0.5;
  std::size_t interval = 0;
  std::size_t slice = 0;

  std::size_t size() const { return clusters.size(); }
  friend bool operator==(const Clustering&, const Clustering&) = default;
};

// Radius-1 balls around the centers keeping edges with strength >= tau; every
// vertex outside all balls becomes a singleton. Throws InvalidTau.
Clustering extract_communities(const Graph& g, double tau);
Clustering extract_communities(const Graph& g, const StrengthMap& strengths, double tau);

}  // namespace dysnav
