#include "dysnav/discretize.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fmt/format.h>
#include <map>

#include "dysnav/error.hpp"

namespace dysnav {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t days_of(int year, int month, int day) {
  using namespace std::chrono;
  const auto ymd = std::chrono::year{year} / std::chrono::month{static_cast<unsigned>(month)} / 1;
  return (sys_days{ymd} + days{day - 1}).time_since_epoch().count();
}

struct Accumulator {
  double sum = 0.0;
  std::size_t count = 0;
};

double metric_value(const Accumulator& acc, MetricKind metric) {
  switch (metric) {
    case MetricKind::TotalTime: return acc.sum;
    case MetricKind::AverageTime: return acc.sum / static_cast<double>(acc.count);
    case MetricKind::Occurrency: return static_cast<double>(acc.count);
  }
  return 0.0;
}

SnapshotGraph make_snapshot(std::size_t node_count, const std::map<Edge, Accumulator>& acc, const Interval& interval,
                            MetricKind metric) {
  SnapshotGraph snap;
  snap.interval = interval;
  snap.metric = metric;
  std::vector<Edge> edges;
  edges.reserve(acc.size());
  for (const auto& [e, _] : acc) edges.push_back(e);
  snap.graph = Graph(node_count, edges);
  snap.weights.reserve(acc.size());
  // std::map iteration order matches the graph's canonical edge order.
  for (const auto& [_, a] : acc) snap.weights.push_back(metric_value(a, metric));
  snap.cutoff = 0.0;
  return snap;
}

}  // namespace

std::string_view to_string(MetricKind metric) {
  switch (metric) {
    case MetricKind::TotalTime: return "total";
    case MetricKind::AverageTime: return "average";
    case MetricKind::Occurrency: return "occurrency";
  }
  return "total";
}

MetricKind parse_metric(std::string_view text) {
  if (text == "total") return MetricKind::TotalTime;
  if (text == "average") return MetricKind::AverageTime;
  if (text == "occurrency") return MetricKind::Occurrency;
  throw Error(ErrorCode::InvalidConfig, fmt::format("unknown metric '{}'", text));
}

Duration parse_duration(std::string_view text) {
  std::size_t split = 0;
  while (split < text.size() && text[split] >= '0' && text[split] <= '9') ++split;
  Duration d;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + split, d.count);
  if (split == 0 || ec != std::errc{}) {
    throw Error(ErrorCode::InvalidEpsilon, fmt::format("invalid duration '{}'", text));
  }
  const std::string_view unit = text.substr(split);
  if (unit == "y") d.unit = Precision::Year;
  else if (unit == "mo") d.unit = Precision::Month;
  else if (unit == "d") d.unit = Precision::Day;
  else if (unit == "h") d.unit = Precision::Hour;
  else if (unit == "m") d.unit = Precision::Minute;
  else if (unit == "s") d.unit = Precision::Second;
  else throw Error(ErrorCode::InvalidEpsilon, fmt::format("unknown duration unit in '{}'", text));
  if (d.count <= 0) throw Error(ErrorCode::InvalidEpsilon, "duration must be positive");
  return d;
}

std::string format_duration(const Duration& d) {
  static constexpr std::array<std::string_view, 6> kUnits{"y", "mo", "d", "h", "m", "s"};
  return fmt::format("{}{}", d.count, kUnits[static_cast<std::size_t>(d.unit)]);
}

std::int64_t ordinal(const TimePoint& t, Precision unit) {
  const int month = t.month().value_or(1);
  const int day = t.day().value_or(1);
  switch (unit) {
    case Precision::Year: return t.year();
    case Precision::Month: return std::int64_t{t.year()} * 12 + (month - 1);
    default: break;
  }
  std::int64_t v = days_of(t.year(), month, day);
  if (unit == Precision::Day) return v;
  v = v * 24 + t.raw(3);
  if (unit == Precision::Hour) return v;
  v = v * 60 + t.raw(4);
  if (unit == Precision::Minute) return v;
  return v * 60 + t.raw(5);
}

TimePoint from_ordinal(std::int64_t value, Precision unit) {
  std::array<int, 6> f{};
  if (unit == Precision::Year) {
    f[0] = static_cast<int>(value);
    return TimePoint::from_fields(std::span<const int>(f.data(), 1));
  }
  if (unit == Precision::Month) {
    f[0] = static_cast<int>(floor_div(value, 12));
    f[1] = static_cast<int>(value - std::int64_t{f[0]} * 12) + 1;
    return TimePoint::from_fields(std::span<const int>(f.data(), 2));
  }
  std::int64_t days = value;
  std::int64_t rest = 0;
  switch (unit) {
    case Precision::Hour: days = floor_div(value, 24); rest = value - days * 24; break;
    case Precision::Minute: days = floor_div(value, 24 * 60); rest = value - days * 24 * 60; break;
    case Precision::Second: days = floor_div(value, 24 * 3600); rest = value - days * 24 * 3600; break;
    default: break;
  }
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
  f[0] = static_cast<int>(ymd.year());
  f[1] = static_cast<int>(static_cast<unsigned>(ymd.month()));
  f[2] = static_cast<int>(static_cast<unsigned>(ymd.day()));
  switch (unit) {
    case Precision::Hour: f[3] = static_cast<int>(rest); break;
    case Precision::Minute: f[3] = static_cast<int>(rest / 60); f[4] = static_cast<int>(rest % 60); break;
    case Precision::Second:
      f[3] = static_cast<int>(rest / 3600);
      f[4] = static_cast<int>(rest / 60 % 60);
      f[5] = static_cast<int>(rest % 60);
      break;
    default: break;
  }
  return TimePoint::from_fields(std::span<const int>(f.data(), static_cast<std::size_t>(unit) + 1));
}

bool Interval::contains(const TimePoint& t) const {
  const Precision unit = start.precision();
  const auto o = ordinal(t, unit);
  return o >= ordinal(start, unit) && o < ordinal(end, unit);
}

double SnapshotGraph::weight(NodeIndex u, NodeIndex v) const {
  const auto idx = graph.edge_index(u, v);
  if (idx == Graph::npos) throw Error(ErrorCode::EdgeNotPresent, fmt::format("edge ({}, {}) not in snapshot", u, v));
  return weights[idx];
}

SnapshotGraph aggregate_interval(const DynamicGraph& dg, const Interval& interval, MetricKind metric) {
  std::map<Edge, Accumulator> acc;
  for (const auto& r : dg.events) {
    if (!interval.contains(r.time)) continue;
    const auto a = dg.index_of(r.user_a);
    const auto b = dg.index_of(r.user_b);
    if (!a || !b || *a == *b) continue;
    auto& slot = acc[canonical(*a, *b)];
    slot.sum += r.strength;
    ++slot.count;
  }
  return make_snapshot(dg.nodes.size(), acc, interval, metric);
}

std::vector<double> slice_cutoffs(double w_min, double w_max, std::size_t omega) {
  std::vector<double> cutoffs(omega, w_min);
  if (w_max > w_min) {
    const double step = (w_max - w_min) / static_cast<double>(omega);
    for (std::size_t j = 0; j < omega; ++j) cutoffs[j] = w_min + static_cast<double>(j) * step;
  }
  return cutoffs;
}

SnapshotGraph filter_slice(const SnapshotGraph& base, std::size_t slice_index, double cutoff) {
  SnapshotGraph out;
  out.interval = base.interval;
  out.slice_index = slice_index;
  out.metric = base.metric;
  out.cutoff = cutoff;
  std::vector<Edge> kept;
  for (std::size_t k = 0; k < base.weights.size(); ++k) {
    if (base.weights[k] >= cutoff) {
      kept.push_back(base.graph.edges()[k]);
      out.weights.push_back(base.weights[k]);
    }
  }
  out.graph = Graph(base.graph.node_count(), kept);
  return out;
}

SnapshotGrid discretize(const DynamicGraph& dg, Duration epsilon, std::size_t omega, MetricKind metric) {
  if (epsilon.count <= 0) throw Error(ErrorCode::InvalidEpsilon, "epsilon must be positive");
  if (omega < 1) throw Error(ErrorCode::InvalidOmega, "omega must be at least 1");
  if (dg.events.empty()) throw Error(ErrorCode::EmptyInput, "dynamic graph has no events");

  const Precision unit = epsilon.unit;
  const std::int64_t origin = ordinal(dg.t_min, unit);
  const std::int64_t span = ordinal(dg.t_max, unit) - origin + 1;
  if (epsilon.count > span) {
    throw Error(ErrorCode::InvalidEpsilon,
                fmt::format("epsilon {} is coarser than the data span of {} units", format_duration(epsilon), span));
  }
  const auto alpha = static_cast<std::size_t>((span + epsilon.count - 1) / epsilon.count);

  std::vector<std::map<Edge, Accumulator>> acc(alpha);
  for (const auto& r : dg.events) {
    const auto i = static_cast<std::size_t>((ordinal(r.time, unit) - origin) / epsilon.count);
    const auto a = dg.index_of(r.user_a);
    const auto b = dg.index_of(r.user_b);
    if (!a || !b || *a == *b) continue;
    auto& slot = acc[i][canonical(*a, *b)];
    slot.sum += r.strength;
    ++slot.count;
  }

  SnapshotGrid grid;
  grid.nodes = dg.nodes;
  grid.epsilon = epsilon;
  grid.omega = omega;
  grid.metric = metric;

  std::vector<SnapshotGraph> base;
  base.reserve(alpha);
  bool any_edge = false;
  double w_min = 0.0;
  double w_max = 0.0;
  for (std::size_t i = 0; i < alpha; ++i) {
    Interval interval{from_ordinal(origin + static_cast<std::int64_t>(i) * epsilon.count, unit),
                      from_ordinal(origin + static_cast<std::int64_t>(i + 1) * epsilon.count, unit), i};
    base.push_back(make_snapshot(dg.nodes.size(), acc[i], interval, metric));
    for (double w : base.back().weights) {
      if (!any_edge) {
        w_min = w_max = w;
        any_edge = true;
      }
      w_min = std::min(w_min, w);
      w_max = std::max(w_max, w);
    }
  }
  grid.weight_range = {w_min, w_max};
  grid.cutoffs = slice_cutoffs(w_min, w_max, omega);

  grid.cells.resize(alpha);
  for (std::size_t i = 0; i < alpha; ++i) {
    grid.cells[i].reserve(omega);
    for (std::size_t j = 0; j < omega; ++j) grid.cells[i].push_back(filter_slice(base[i], j, grid.cutoffs[j]));
  }
  return grid;
}

}  // namespace dysnav
