#pragma once

#include <string>
#include <string_view>

#include "pulse/encoding.hpp"
#include "pulse/occupancy.hpp"
#include "pulse/snapshot.hpp"

namespace pulse {

inline constexpr std::string_view kSchemaVersion = "1";

struct PayloadEnvelope {
  std::string schema_version{kSchemaVersion};
  DisplayPayload payload;
  Timestamp virtual_now = 0;
};

// JSON documents with snake_case field names matching the domain types. Key
// order is fixed, so equal values always serialize to identical bytes.
// Parsers throw Error(parse_error) on malformed or schema-violating input.

std::string serialize_series(const OccupancySeries& series);
OccupancySeries parse_series(std::string_view text);

std::string serialize_snapshot(const Snapshot& snapshot, int indent = -1);
Snapshot parse_snapshot(std::string_view text);

std::string serialize_payload(const DisplayPayload& payload);
DisplayPayload parse_payload(std::string_view text);

std::string serialize_envelope(const PayloadEnvelope& envelope);
PayloadEnvelope parse_envelope(std::string_view text);

}  // namespace pulse
