#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dysnav/graph.hpp"
#include "dysnav/ingest.hpp"

namespace dysnav {

enum class MetricKind { TotalTime, AverageTime, Occurrency };

std::string_view to_string(MetricKind metric);
MetricKind parse_metric(std::string_view text);

// Interval width as a count of one calendar unit, written "1d", "3y", "2mo",
// "6h", "15m", "30s".
struct Duration {
  std::int64_t count = 1;
  Precision unit = Precision::Day;

  friend bool operator==(const Duration&, const Duration&) = default;
};

Duration parse_duration(std::string_view text);
std::string format_duration(const Duration& d);

// Position of `t` on a linear axis counted in `unit`. Fields finer than the
// unit are truncated; absent coarser fields read as their first value.
std::int64_t ordinal(const TimePoint& t, Precision unit);
TimePoint from_ordinal(std::int64_t value, Precision unit);

// Half-open [start, end).
struct Interval {
  TimePoint start;
  TimePoint end;
  std::size_t index = 0;

  bool contains(const TimePoint& t) const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct SnapshotGraph {
  Interval interval;
  std::size_t slice_index = 0;
  MetricKind metric = MetricKind::TotalTime;
  double cutoff = 0.0;
  Graph graph;
  std::vector<double> weights;  // parallel to graph.edges()

  double weight(NodeIndex u, NodeIndex v) const;
};

struct SnapshotGrid {
  std::vector<std::string> nodes;
  std::vector<std::vector<SnapshotGraph>> cells;  // [interval][slice]
  Duration epsilon;
  std::size_t omega = 1;
  MetricKind metric = MetricKind::TotalTime;
  std::pair<double, double> weight_range{0.0, 0.0};
  std::vector<double> cutoffs;

  std::size_t alpha() const { return cells.size(); }
  const SnapshotGraph& at(std::size_t i, std::size_t j) const { return cells.at(i).at(j); }
};

// Unfiltered (slice 0) snapshot of the records falling in `interval`.
SnapshotGraph aggregate_interval(const DynamicGraph& dg, const Interval& interval, MetricKind metric);

// Cutoffs w_min + j * (w_max - w_min) / omega for j in [0, omega).
std::vector<double> slice_cutoffs(double w_min, double w_max, std::size_t omega);

// Keeps the edges of `base` with weight >= cutoff.
SnapshotGraph filter_slice(const SnapshotGraph& base, std::size_t slice_index, double cutoff);

SnapshotGrid discretize(const DynamicGraph& dg, Duration epsilon, std::size_t omega, MetricKind metric);

}  // namespace dysnav
