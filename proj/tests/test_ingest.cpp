#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pulse/ingest.hpp"
#include "support/fixtures.hpp"

using namespace pulse;

namespace {

// Field-by-field reading through a general JSON parser.
std::optional<AssociationEvent> parse_with_json(std::string_view line) {
  auto record = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
  if (record.is_discarded() || !record.is_object()) return std::nullopt;
  for (const char* key : {"ts", "dev", "ap", "ev"}) {
    if (!record.contains(key)) return std::nullopt;
  }
  const auto& ts = record["ts"];
  if (!ts.is_number_integer() || !record["dev"].is_string() || !record["ap"].is_string() || !record["ev"].is_string()) {
    return std::nullopt;
  }
  if (ts.is_number_unsigned() ? ts.get<std::uint64_t>() > std::uint64_t(INT64_MAX) : ts.get<std::int64_t>() < 0) {
    return std::nullopt;
  }
  AssociationEvent event{ts.get<std::int64_t>(), record["dev"], record["ap"], EventKind::connect};
  const std::string ev = record["ev"];
  if (event.device_id.empty() || event.ap_id.empty()) return std::nullopt;
  if (ev == "poll") {
    event.kind = EventKind::poll;
  } else if (ev == "disconnect") {
    event.kind = EventKind::disconnect;
  } else if (ev != "connect") {
    return std::nullopt;
  }
  return event;
}

}  // namespace

TEST_CASE("parse_event_line maps fields directly") {
  auto event = parse_event_line(R"({"ts":1554105600,"dev":"a1b2","ap":"AP-LIB-01","ev":"connect"})");
  CHECK(event == AssociationEvent{1554105600, "a1b2", "AP-LIB-01", EventKind::connect});
  CHECK(parse_event_line(R"({"ev":"disconnect","ap":"x","dev":"y","ts":0})").kind == EventKind::disconnect);
}

TEST_CASE("parse_event_line rejects malformed records") {
  const char* bad[] = {
      R"({"ts":-5,"dev":"a1b2","ap":"AP-LIB-01","ev":"connect"})",
      R"({"ts":1554105600,"dev":"a1b2","ap":"AP-LIB-01","ev":"roam"})",
      R"({"ts":1554105600.5,"dev":"a1b2","ap":"AP-LIB-01","ev":"poll"})",
      R"({"ts":"1554105600","dev":"a1b2","ap":"AP-LIB-01","ev":"poll"})",
      R"({"ts":1554105600,"dev":"","ap":"AP-LIB-01","ev":"poll"})",
      R"({"ts":1554105600,"ap":"AP-LIB-01","ev":"poll"})",
      R"({"ts":99999999999999999999,"dev":"a","ap":"b","ev":"poll"})",
      R"([1,2,3])",
      "{\"ts\":1",
      "",
      "\xff\xfe garbage \x01",
  };
  for (const char* line : bad) {
    CAPTURE(line);
    CHECK_THROWS_AS(parse_event_line(line), Error);
    CHECK_FALSE(try_parse_event_line(line).has_value());
  }
}

TEST_CASE("parse and format are inverse") {
  AssociationEvent event{1554105600, "dev \"quoted\" \\ id", "AP-LIB-01", EventKind::poll};
  CHECK(format_event_line(event) == R"({"ts":1554105600,"dev":"dev \"quoted\" \\ id","ap":"AP-LIB-01","ev":"poll"})");
  CHECK(parse_event_line(format_event_line(event)) == event);
}

TEST_CASE("read_log filters unknown access points and counts them") {
  Registry registry = testing::small_campus();
  std::istringstream log(
      R"({"ts":10,"dev":"a","ap":"AP-LIB-01","ev":"connect"})" "\n"
      R"({"ts":20,"dev":"a","ap":"AP-LIB-01","ev":"poll"})" "\n"
      R"({"ts":30,"dev":"b","ap":"NOPE","ev":"connect"})" "\n"
      R"({"ts":40,"dev":"b","ap":"AP-GYM-01","ev":"connect"})" "\n"
      R"({"ts":50,"dev":"a","ap":"AP-LIB-01","ev":"disconnect"})" "\n");
  EventStream stream = read_log(log, registry);
  CHECK(stream.events.size() == 4);
  CHECK(stream.skipped_unknown_ap == 1);
  CHECK(stream.skipped_malformed == 0);
}

TEST_CASE("read_log of an empty source") {
  std::istringstream empty;
  EventStream stream = read_log(empty, testing::small_campus());
  CHECK(stream.events.empty());
  CHECK(stream.skipped_unknown_ap == 0);
  CHECK(stream.skipped_malformed == 0);
}

TEST_CASE("read_log sorts out-of-order input") {
  std::istringstream log(
      R"({"ts":30,"dev":"a","ap":"AP-LIB-01","ev":"poll"})" "\n"
      R"({"ts":10,"dev":"a","ap":"AP-LIB-01","ev":"connect"})" "\n"
      "\n"
      R"({"ts":20,"dev":"a","ap":"AP-LIB-01","ev":"poll"})" "\n");
  EventStream stream = read_log(log, testing::small_campus());
  REQUIRE(stream.events.size() == 3);
  CHECK(stream.events[0].ts == 10);
  CHECK(stream.events[1].ts == 20);
  CHECK(stream.events[2].ts == 30);
}

TEST_CASE("read_log counts garbage without failing") {
  std::istringstream log("garbage\n{\"ts\":1}\n" R"({"ts":5,"dev":"a","ap":"AP-LIB-01","ev":"poll"})" "\n");
  EventStream stream = read_log(log, testing::small_campus());
  CHECK(stream.events.size() == 1);
  CHECK(stream.skipped_malformed == 2);
}

TEST_CASE("read_log on a missing file is an io error") {
  try {
    read_log(std::filesystem::path("/nonexistent/log.jsonl"), testing::small_campus());
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io_error);
  }
}

TEST_CASE("property: no well-formed known-AP event is lost and order is total") {
  Registry registry = testing::small_campus();
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto log = testing::random_log(seed, registry);
    std::istringstream in(testing::join_lines(log.lines));
    EventStream stream = read_log(in, registry);
    CAPTURE(seed);
    CHECK(log.valid_lines == stream.events.size() + stream.skipped_unknown_ap);
    CHECK(stream.skipped_malformed == log.malformed);
    CHECK(std::is_sorted(stream.events.begin(), stream.events.end(), event_less));

    // Re-reading the produced stream is idempotent.
    std::string rewritten;
    for (const auto& event : stream.events) rewritten += format_event_line(event) + "\n";
    std::istringstream again(rewritten);
    EventStream reread = read_log(again, registry);
    CHECK(reread.events == stream.events);
    CHECK(reread.skipped_unknown_ap == 0);
  }
}

TEST_CASE("live ingestion drops events older than the watermark allowance") {
  Registry registry = testing::small_campus();
  LiveIngestor live(registry);
  auto line = [](Timestamp ts, const char* dev) {
    return format_event_line({ts, dev, "AP-LIB-01", EventKind::poll});
  };
  CHECK(live.feed_line(line(1000, "a")));
  CHECK(live.feed_line(line(800, "b")));   // 200 s late: accepted
  CHECK(live.feed_line(line(700, "c")));   // exactly 300 s late: accepted
  CHECK_FALSE(live.feed_line(line(699, "d")));
  CHECK_FALSE(live.feed_line("nonsense"));
  CHECK_FALSE(live.feed_line(format_event_line({1001, "e", "NOPE", EventKind::poll})));
  CHECK(live.stream().dropped_late == 1);
  CHECK(live.stream().skipped_malformed == 1);
  CHECK(live.stream().skipped_unknown_ap == 1);
  CHECK(*live.watermark() == 1000);
  REQUIRE(live.stream().events.size() == 3);
  CHECK(std::is_sorted(live.stream().events.begin(), live.stream().events.end(), event_less));

  live.evict_before(800);
  CHECK(live.stream().events.size() == 2);
  CHECK(live.stream().events.front().ts == 800);
}

TEST_CASE("property: parsing agrees with a general JSON reader on perturbed lines") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> splices = {"", " ", "0", "-", "\\", "\\u0041", "\"", "\xc3\xa9", "\xff", "\t",
                                            "9999999999999999999", ".5", "e3", "}", "{", ",", ":", "\r"};
  const std::vector<std::string> seeds = {
      R"({"ts":1554105600,"dev":"0015fbbb20a64b66","ap":"AP-LIB-01","ev":"poll"})",
      R"({"ts":0,"dev":"d","ap":"a","ev":"disconnect"})",
      R"({"ts":9223372036854775807,"dev":"x y","ap":"AP/1","ev":"connect"})",
  };
  for (int round = 0; round < 20000; ++round) {
    std::string line = seeds[rng() % seeds.size()];
    for (int edits = static_cast<int>(rng() % 3); edits > 0; --edits) {
      const std::size_t at = rng() % (line.size() + 1);
      const std::size_t cut = rng() % 3 == 0 ? rng() % 3 : 0;
      line = line.substr(0, at) + splices[rng() % splices.size()] + line.substr(std::min(line.size(), at + cut));
    }
    CAPTURE(line);
    CHECK(try_parse_event_line(line) == parse_with_json(line));
  }
}

TEST_CASE("format_event_line matches a general JSON writer") {
  const AssociationEvent events[] = {
      {1554105600, "0015fbbb20a64b66", "AP-LIB-01", EventKind::poll},
      {-4, "d", "a", EventKind::connect},
      {7, "quote\"d", "back\\slash", EventKind::disconnect},
      {7, "caf\xc3\xa9", "tab\there", EventKind::poll},
  };
  for (const auto& event : events) {
    nlohmann::ordered_json record;
    record["ts"] = event.ts;
    record["dev"] = event.device_id;
    record["ap"] = event.ap_id;
    record["ev"] = to_string(event.kind);
    CHECK(format_event_line(event) == record.dump());
  }
}
