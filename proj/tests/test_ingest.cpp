#include <algorithm>
#include <random>

#include "doctest.h"
#include "dysnav/error.hpp"
#include "dysnav/ingest.hpp"

using namespace dysnav;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected dysnav::Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE_BEGIN("ingest");

TEST_CASE("parse_timestamp maps fields by precision") {
  const auto t = parse_timestamp("2006/06/03-14:22:05");
  CHECK(t.precision() == Precision::Second);
  CHECK(t.year() == 2006);
  CHECK(t.month() == 6);
  CHECK(t.day() == 3);
  CHECK(t.hour() == 14);
  CHECK(t.minute() == 22);
  CHECK(t.second() == 5);

  const auto y = parse_timestamp("1997");
  CHECK(y.precision() == Precision::Year);
  CHECK(y.year() == 1997);
  CHECK_FALSE(y.month().has_value());

  CHECK(parse_timestamp("2009/12/01-11:24").precision() == Precision::Minute);
}

TEST_CASE("parse_timestamp rejects malformed text") {
  for (const char* bad : {"2006-06-03", "2006/13", "2006/06/32", "2006/06/03-24", "2006/06/03-10:60", "06/06",
                          "2006/", "2006/06/03-14:22:05x", "2006/06/03-14:22:05:01", "abcd", "", "2006/6a"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { parse_timestamp(bad); }) == ErrorCode::MalformedTimestamp);
  }
}

TEST_CASE("timestamps order lexicographically with absent fields as zero") {
  CHECK(parse_timestamp("2006") < parse_timestamp("2006/01"));
  CHECK(parse_timestamp("2006/06/03") < parse_timestamp("2006/06/03-00:00:01"));
  CHECK(parse_timestamp("2005/12/31-23:59:59") < parse_timestamp("2006"));
}

TEST_CASE("format inverts parse at every precision") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> year(0, 9999), month(1, 12), day(1, 31), hour(0, 23), minsec(0, 59), prec(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<int, 6> f{year(rng), month(rng), day(rng), hour(rng), minsec(rng), minsec(rng)};
    const auto n = static_cast<std::size_t>(prec(rng));
    const auto t = TimePoint::from_fields(std::span<const int>(f.data(), n));
    const auto text = format_timestamp(t);
    CAPTURE(text);
    REQUIRE(parse_timestamp(text) == t);
  }
}

TEST_CASE("parse_records") {
  SUBCASE("well-formed line") {
    const auto parsed = parse_records("a,b,2006/06/01,3.5,call\n");
    REQUIRE(parsed.records.size() == 1);
    const auto& r = parsed.records[0];
    CHECK(r.user_a == "a");
    CHECK(r.user_b == "b");
    CHECK(r.time == parse_timestamp("2006/06/01"));
    CHECK(r.strength == 3.5);
    CHECK(r.relationship_class == "call");
  }
  SUBCASE("field count diagnostic") {
    const auto parsed = parse_records("a,b,2006/06/01\nx,y,2006,1,c\n");
    REQUIRE(parsed.diagnostics.size() == 1);
    CHECK(parsed.diagnostics[0].line == 1);
    CHECK(parsed.diagnostics[0].reason == "expected 5 fields, got 3");
  }
  SUBCASE("good and bad lines mix, blank lines skipped") {
    const auto parsed = parse_records("a,b,2006/06/01,1,x\n\nq,r,2006-06-01,1,x\r\nc,d,2006/06/02,2,y\n");
    CHECK(parsed.records.size() == 2);
    REQUIRE(parsed.diagnostics.size() == 1);
    CHECK(parsed.diagnostics[0].line == 3);
  }
  SUBCASE("bad strength values") {
    const auto parsed = parse_records("a,b,2006,-1,x\na,b,2006,abc,x\na,b,2006,,x\n,b,2006,1,x\na,b,2006,2,x\n");
    CHECK(parsed.records.size() == 1);
    CHECK(parsed.diagnostics.size() == 4);
  }
  SUBCASE("no good lines is EmptyInput") {
    CHECK(code_of([] { parse_records("a,b\n"); }) == ErrorCode::EmptyInput);
    CHECK(code_of([] { parse_records(""); }) == ErrorCode::EmptyInput);
  }
}

TEST_CASE("build_dynamic_graph") {
  const auto t0 = parse_timestamp("2006/06/01");
  const auto t1 = parse_timestamp("2006/06/02");

  SUBCASE("nodes, ordering and span") {
    const auto dg = build_dynamic_graph({{"a", "b", t1, 1, ""}, {"b", "c", t0, 1, ""}});
    CHECK(dg.nodes == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(dg.events.size() == 2);
    CHECK(dg.events[0].time == t0);
    CHECK(dg.events[1].time == t1);
    CHECK(dg.t_min == t0);
    CHECK(dg.t_max == t1);
  }
  SUBCASE("only self-loops is EmptyInput") {
    CHECK(code_of([&] { build_dynamic_graph({{"a", "a", t0, 1, ""}}); }) == ErrorCode::EmptyInput);
  }
  SUBCASE("single record has degenerate span") {
    const auto dg = build_dynamic_graph({{"a", "b", t0, 1, ""}});
    CHECK(dg.t_min == dg.t_max);
  }
  SUBCASE("ids are opaque strings") {
    const auto dg = build_dynamic_graph({{"10", "2", t0, 1, ""}, {"Alice", "2", t0, 1, ""}});
    CHECK(dg.nodes == std::vector<std::string>{"10", "2", "Alice"});
    CHECK(dg.index_of("2") == 1u);
    CHECK_FALSE(dg.index_of("3").has_value());
  }
}

TEST_CASE("record accounting and permutation invariance") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> node(0, 6), day(1, 9), kind(0, 9);
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    std::size_t total = 0;
    for (int k = 0; k < 40; ++k) {
      ++total;
      const int kd = kind(rng);
      if (kd == 0) {
        text += "broken line\n";
      } else {
        text += std::to_string(node(rng)) + "," + std::to_string(node(rng)) + ",2006/06/0" + std::to_string(day(rng)) + ",1,c\n";
      }
    }
    const auto parsed = parse_records(text);
    std::vector<InteractionRecord> shuffled = parsed.records;
    const auto dg = build_dynamic_graph(parsed.records);
    CHECK(total == dg.events.size() + parsed.diagnostics.size() + dg.dropped_self_loops);

    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto other = build_dynamic_graph(shuffled);
    CHECK(other.nodes == dg.nodes);
    auto key = [](const InteractionRecord& r) { return std::tie(r.time, r.user_a, r.user_b, r.strength); };
    auto a = dg.events, b = other.events;
    auto less = [&](const auto& x, const auto& y) { return key(x) < key(y); };
    std::sort(a.begin(), a.end(), less);
    std::sort(b.begin(), b.end(), less);
    CHECK(a == b);
    CHECK(std::is_sorted(other.events.begin(), other.events.end(),
                         [](const auto& x, const auto& y) { return x.time < y.time; }));
  }
}

TEST_SUITE_END();
