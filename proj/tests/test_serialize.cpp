#include "json.hpp"

#include "doctest.h"
#include "pulse/serialize.hpp"
#include "pulse/simgen.hpp"
#include "support/fixtures.hpp"

using namespace pulse;

namespace {

Snapshot sample_snapshot(const Registry& registry) {
  static const EventStream stream = generate({300, 1, 21}, registry);
  return build_snapshot(stream, registry, kDefaultSimStart + 12 * 3600 + 1200);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::io_error;  // sentinel: nothing thrown
}

}  // namespace

TEST_CASE("series round trip") {
  OccupancySeries series{"LIB", 1000, 300, {1, 2, 3}};
  const std::string text = serialize_series(series);
  CHECK(text == R"({"building_id":"LIB","bin_start":1000,"bin_width":300,"counts":[1,2,3]})");
  CHECK(parse_series(text) == series);
}

TEST_CASE("snapshot round trip is lossless and byte stable") {
  Registry registry = testing::small_campus();
  Snapshot snapshot = sample_snapshot(registry);
  const std::string text = serialize_snapshot(snapshot);
  Snapshot back = parse_snapshot(text);
  CHECK(back == snapshot);
  CHECK(serialize_snapshot(back) == text);
  CHECK(parse_snapshot(serialize_snapshot(snapshot, 2)) == snapshot);
}

TEST_CASE("payload round trip") {
  Registry registry = testing::small_campus();
  DisplayPayload payload = build_display_payload(sample_snapshot(registry), registry);
  const std::string text = serialize_payload(payload);
  DisplayPayload back = parse_payload(text);
  CHECK(back == payload);
  CHECK(serialize_payload(back) == text);

  auto json = nlohmann::json::parse(text);
  CHECK(json.at("map_points").size() == registry.buildings().size());
  CHECK(json.at("chord").at("anchors").is_array());
  CHECK(json.at("popup_rotation").at("dwell_seconds") == 10);
  CHECK(json.at("ladders").contains("in"));
}

TEST_CASE("envelope round trip and version check") {
  Registry registry = testing::small_campus();
  PayloadEnvelope envelope{std::string(kSchemaVersion), build_display_payload(sample_snapshot(registry), registry),
                           kDefaultSimStart + 12 * 3600 + 1200};
  const std::string text = serialize_envelope(envelope);
  PayloadEnvelope back = parse_envelope(text);
  CHECK(back.schema_version == "1");
  CHECK(back.virtual_now == envelope.virtual_now);
  CHECK(back.payload == envelope.payload);

  auto json = nlohmann::json::parse(text);
  json["schema_version"] = "2";
  CHECK(kind_of([&] { parse_envelope(json.dump()); }) == ErrorKind::parse_error);
}

TEST_CASE("malformed documents are parse errors") {
  CHECK(kind_of([] { parse_series("{"); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { parse_series(R"({"building_id":"X"})"); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { parse_snapshot("[]"); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { parse_payload(R"({"generated_at":"soon"})"); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { parse_envelope("null"); }) == ErrorKind::parse_error);
}
