#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dysnav/discretize.hpp"
#include "dysnav/error.hpp"
#include "dysnav/hierarchy.hpp"
#include "dysnav/ingest.hpp"
#include "dysnav/similarity.hpp"

namespace dysnav {

struct AnalysisConfig {
  std::string input_path;
  std::string epsilon = "1d";
  std::size_t omega = 1;
  double tau = 0.5;
  MetricKind metric = MetricKind::TotalTime;
  HierarchyMode mode = HierarchyMode::Normal;
  std::vector<double> tau_grid;  // non-empty switches the row axis to taus
  std::string output_path;
  std::optional<std::uint16_t> serve_port;
  std::optional<CellRef> hierarchy_cell;  // use one snapshot instead of the consensus graph
  double consensus_threshold = kDefaultConsensusThreshold;
  bool literal_min_tree = false;

  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

// Throws InvalidConfig, InvalidEpsilon, InvalidOmega or InvalidTau.
void validate(const AnalysisConfig& cfg);

HierarchyMode parse_mode(std::string_view text);

// A module error tagged with the pipeline step that raised it.
class PipelineError : public Error {
 public:
  PipelineError(std::string step, const Error& cause)
      : Error(cause.code(), step + ": " + cause.what()), step_(std::move(step)) {}

  const std::string& step() const { return step_; }

 private:
  std::string step_;
};

struct WeightedLink {
  NodeIndex u = 0;
  NodeIndex v = 0;
  double weight = 0.0;

  friend bool operator==(const WeightedLink&, const WeightedLink&) = default;
};

struct CellData {
  CellRef cell;
  Interval interval;
  double cutoff = 0.0;
  std::vector<WeightedLink> edges;
  Clustering clustering;

  friend bool operator==(const CellData&, const CellData&) = default;
};

struct GridSummary {
  std::size_t alpha = 0;
  std::size_t omega = 0;
  RowAxis axis = RowAxis::Slices;
  std::string epsilon;
  MetricKind metric = MetricKind::TotalTime;
  std::pair<double, double> weight_range{0.0, 0.0};
  std::vector<double> cutoffs;
  std::vector<double> taus;

  friend bool operator==(const GridSummary&, const GridSummary&) = default;
};

struct HierarchyEntry {
  NodeIndex node = 0;  // index into the bundle's node table
  std::optional<NodeIndex> parent;
  std::optional<std::size_t> depth;
  double delta = 0.0;
  std::optional<Role> role;

  friend bool operator==(const HierarchyEntry&, const HierarchyEntry&) = default;
};

struct HierarchyReport {
  HierarchyMode mode = HierarchyMode::Normal;
  std::string source;  // "consensus" or "cell i,j"
  NodeIndex root = 0;
  double global_efficiency = 0.0;
  bool fell_back = false;
  std::vector<NodeIndex> top_nodes;
  std::vector<HierarchyEntry> nodes;

  friend bool operator==(const HierarchyReport&, const HierarchyReport&) = default;
};

struct AnalysisBundle {
  AnalysisConfig config;
  std::vector<std::string> nodes;
  GridSummary grid;
  std::vector<CellData> cells;  // column-major
  std::vector<SimilarityEdge> similarity;
  ChangeReport changes;
  std::vector<CellRef> path;
  std::vector<ConsensusCommunity> consensus;
  std::optional<HierarchyReport> hierarchy;
  std::vector<LineDiagnostic> diagnostics;
  std::size_t dropped_self_loops = 0;
  std::vector<std::string> warnings;

  friend bool operator==(const AnalysisBundle&, const AnalysisBundle&) = default;
};

// Pipeline state kept alive for interactive recomputation.
class Analysis {
 public:
  static Analysis run(const AnalysisConfig& cfg, std::istream& input);
  static Analysis run(const AnalysisConfig& cfg);  // reads cfg.input_path

  const AnalysisBundle& bundle() const { return bundle_; }
  const SnapshotGrid& grid() const { return grid_; }
  const SimilarityGraph& similarity() const { return similarity_; }

  // Re-clusters every cell at `tau` (Slices axis) and resets the selection
  // to the best full path.
  void recluster(double tau);

  // Selects the best path between two cells and recomputes consensus and
  // hierarchy for it.
  void select_path(CellRef from, CellRef to);

  // Hierarchy of the current selection in either mode; nullopt when the
  // selected graph is empty.
  const std::optional<HierarchyReport>& hierarchy(HierarchyMode mode) const;

 private:
  void refresh_from_similarity();
  void refresh_selection(std::vector<CellRef> path);

  AnalysisConfig config_;
  SnapshotGrid grid_;
  SimilarityGraph similarity_;
  AnalysisBundle bundle_;
  std::optional<HierarchyReport> normal_;
  std::optional<HierarchyReport> counter_terrorism_;
};

AnalysisBundle run_pipeline(const AnalysisConfig& cfg);
AnalysisBundle run_pipeline(const AnalysisConfig& cfg, std::istream& input);

// Graph the hierarchy is inferred on: union of the path cells' edges among
// members of multi-node consensus communities. Returns the global node
// indices of its vertices alongside.
std::pair<Graph, std::vector<NodeIndex>> consensus_graph(const SnapshotGrid& grid, const SimilarityGraph& sg,
                                                         std::span<const CellRef> path,
                                                         std::span<const ConsensusCommunity> communities);

}  // namespace dysnav
