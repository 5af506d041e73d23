#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dysnav {

enum class Precision : std::uint8_t { Year, Month, Day, Hour, Minute, Second };

// Calendar time with a variable-length field prefix:
// yyyy[/mm[/dd[-hr[:mn[:sc]]]]]. Absent fields are stored as 0.
class TimePoint {
 public:
  TimePoint() = default;

  // Builds from the populated prefix; throws MalformedTimestamp on range errors.
  static TimePoint from_fields(std::span<const int> fields);

  Precision precision() const { return precision_; }
  int year() const { return fields_[0]; }
  std::optional<int> month() const { return field(1); }
  std::optional<int> day() const { return field(2); }
  std::optional<int> hour() const { return field(3); }
  std::optional<int> minute() const { return field(4); }
  std::optional<int> second() const { return field(5); }

  // Field value with absent fields read as 0.
  int raw(std::size_t index) const { return fields_[index]; }

  friend bool operator==(const TimePoint&, const TimePoint&) = default;
  friend std::strong_ordering operator<=>(const TimePoint& a, const TimePoint& b) {
    if (auto c = a.fields_ <=> b.fields_; c != 0) return c;
    return a.precision_ <=> b.precision_;
  }

 private:
  std::optional<int> field(std::size_t index) const {
    if (static_cast<std::size_t>(precision_) < index) return std::nullopt;
    return fields_[index];
  }

  std::array<int, 6> fields_{};
  Precision precision_ = Precision::Year;
};

TimePoint parse_timestamp(std::string_view text);
std::string format_timestamp(const TimePoint& t);

struct InteractionRecord {
  std::string user_a;
  std::string user_b;
  TimePoint time;
  double strength = 0.0;
  std::string relationship_class;

  friend bool operator==(const InteractionRecord&, const InteractionRecord&) = default;
};

struct LineDiagnostic {
  std::size_t line = 0;  // 1-based
  std::string reason;

  friend bool operator==(const LineDiagnostic&, const LineDiagnostic&) = default;
};

struct ParsedRecords {
  std::vector<InteractionRecord> records;
  std::vector<LineDiagnostic> diagnostics;
};

// Parses `user_a,user_b,timestamp,strength,class` lines. Bad lines become
// diagnostics; throws EmptyInput when no line is well-formed.
ParsedRecords parse_records(std::istream& in);
ParsedRecords parse_records(std::string_view text);

struct DynamicGraph {
  std::vector<std::string> nodes;  // sorted, unique
  std::vector<InteractionRecord> events;  // stable-sorted by time
  TimePoint t_min;
  TimePoint t_max;
  std::size_t dropped_self_loops = 0;

  // Position of `id` in nodes, if present.
  std::optional<std::uint32_t> index_of(std::string_view id) const;
};

DynamicGraph build_dynamic_graph(std::vector<InteractionRecord> records);

}  // namespace dysnav
