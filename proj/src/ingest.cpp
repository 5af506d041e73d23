#include "dysnav/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <sstream>

#include "dysnav/error.hpp"

namespace dysnav {
namespace {

constexpr std::array<char, 5> kSeparators{'/', '/', '-', ':', ':'};
constexpr std::array<std::pair<int, int>, 6> kRanges{{{0, 9999}, {1, 12}, {1, 31}, {0, 23}, {0, 59}, {0, 59}}};

[[noreturn]] void malformed(std::string_view text, std::string_view why) {
  throw Error(ErrorCode::MalformedTimestamp, fmt::format("malformed timestamp '{}': {}", text, why));
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

TimePoint TimePoint::from_fields(std::span<const int> fields) {
  if (fields.empty() || fields.size() > 6) throw Error(ErrorCode::MalformedTimestamp, "timestamp needs 1 to 6 fields");
  TimePoint t;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto [lo, hi] = kRanges[i];
    if (fields[i] < lo || fields[i] > hi) {
      throw Error(ErrorCode::MalformedTimestamp, fmt::format("timestamp field {} out of range: {}", i, fields[i]));
    }
    t.fields_[i] = fields[i];
  }
  t.precision_ = static_cast<Precision>(fields.size() - 1);
  return t;
}

TimePoint parse_timestamp(std::string_view text) {
  std::array<int, 6> fields{};
  std::size_t count = 0;
  std::size_t pos = 0;
  while (true) {
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    const std::size_t digits = pos - start;
    if (digits == 0) malformed(text, "expected digits");
    if (count == 0 ? digits != 4 : digits > 2) malformed(text, "wrong field width");
    std::from_chars(text.data() + start, text.data() + pos, fields[count]);
    ++count;
    if (pos == text.size()) break;
    if (count == fields.size()) malformed(text, "trailing characters");
    if (text[pos] != kSeparators[count - 1]) malformed(text, fmt::format("unexpected separator '{}'", text[pos]));
    ++pos;
  }
  try {
    return TimePoint::from_fields(std::span<const int>(fields.data(), count));
  } catch (const Error& e) {
    malformed(text, e.what());
  }
}

std::string format_timestamp(const TimePoint& t) {
  std::string out = fmt::format("{:04}", t.year());
  const auto n = static_cast<std::size_t>(t.precision());
  for (std::size_t i = 1; i <= n; ++i) out += fmt::format("{}{:02}", kSeparators[i - 1], t.raw(i));
  return out;
}

ParsedRecords parse_records(std::istream& in) {
  ParsedRecords result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      fields.push_back(trim(view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 5) {
      result.diagnostics.push_back({line_no, fmt::format("expected 5 fields, got {}", fields.size())});
      continue;
    }
    if (fields[0].empty() || fields[1].empty()) {
      result.diagnostics.push_back({line_no, "empty user id"});
      continue;
    }
    InteractionRecord rec;
    rec.user_a = fields[0];
    rec.user_b = fields[1];
    try {
      rec.time = parse_timestamp(fields[2]);
    } catch (const Error& e) {
      result.diagnostics.push_back({line_no, e.what()});
      continue;
    }
    const auto& s = fields[3];
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), rec.strength);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(rec.strength)) {
      result.diagnostics.push_back({line_no, fmt::format("invalid strength '{}'", s)});
      continue;
    }
    if (rec.strength < 0) {
      result.diagnostics.push_back({line_no, fmt::format("negative strength '{}'", s)});
      continue;
    }
    rec.relationship_class = fields[4];
    result.records.push_back(std::move(rec));
  }
  if (result.records.empty()) {
    throw Error(ErrorCode::EmptyInput,
                fmt::format("no well-formed records ({} malformed lines)", result.diagnostics.size()));
  }
  return result;
}

ParsedRecords parse_records(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_records(in);
}

std::optional<std::uint32_t> DynamicGraph::index_of(std::string_view id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes.begin());
}

DynamicGraph build_dynamic_graph(std::vector<InteractionRecord> records) {
  DynamicGraph dg;
  const auto loops = std::remove_if(records.begin(), records.end(),
                                    [](const InteractionRecord& r) { return r.user_a == r.user_b; });
  dg.dropped_self_loops = static_cast<std::size_t>(records.end() - loops);
  records.erase(loops, records.end());
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records left after dropping self-loops");

  std::stable_sort(records.begin(), records.end(),
                   [](const InteractionRecord& a, const InteractionRecord& b) { return a.time < b.time; });
  for (const auto& r : records) {
    dg.nodes.push_back(r.user_a);
    dg.nodes.push_back(r.user_b);
  }
  std::sort(dg.nodes.begin(), dg.nodes.end());
  dg.nodes.erase(std::unique(dg.nodes.begin(), dg.nodes.end()), dg.nodes.end());
  dg.t_min = records.front().time;
  dg.t_max = records.back().time;
  dg.events = std::move(records);
  return dg;
}

}  // namespace dysnav
