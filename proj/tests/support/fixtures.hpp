#pragma once

// Shared test fixtures: small registries and a random log generator.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pulse/ingest.hpp"
#include "pulse/registry.hpp"

namespace pulse::testing {

/// Three zones, seven buildings, eleven access points.
///   ACAD: LIB (library, important), ENG (academic), SCI (academic)
///   LIFE: CANT (canteen, important), DORM1, DORM2 (dormitory)
///   SPRT: GYM (sports, important)
inline Registry small_campus() {
  std::vector<Zone> zones{{"ACAD", "Academic"}, {"LIFE", "Student Life"}, {"SPRT", "Sports"}};
  std::vector<Building> buildings{
      {"CANT", "Canteen", "LIFE", 22.3372, 114.2637, Category::canteen, true},
      {"DORM1", "Hall I", "LIFE", 22.3380, 114.2690, Category::dormitory, false},
      {"DORM2", "Hall II", "LIFE", 22.3385, 114.2700, Category::dormitory, false},
      {"ENG", "Engineering", "ACAD", 22.3359, 114.2641, Category::academic, false},
      {"GYM", "Sports Centre", "SPRT", 22.3349, 114.2668, Category::sports, true},
      {"LIB", "Main Library", "ACAD", 22.3364, 114.2654, Category::library, true},
      {"SCI", "Science", "ACAD", 22.3351, 114.2630, Category::academic, false},
  };
  std::vector<AccessPoint> aps{
      {"AP-CANT-01", "CANT"}, {"AP-CANT-02", "CANT"}, {"AP-DORM1-01", "DORM1"}, {"AP-DORM2-01", "DORM2"},
      {"AP-ENG-01", "ENG"},   {"AP-ENG-02", "ENG"},   {"AP-GYM-01", "GYM"},     {"AP-LIB-01", "LIB"},
      {"AP-LIB-02", "LIB"},   {"AP-SCI-01", "SCI"},   {"AP-SCI-02", "SCI"},
  };
  return Registry::create(std::move(zones), std::move(buildings), std::move(aps));
}

/// `zones` zones Z0..Zn-1, each with two buildings and one AP per building.
inline Registry zoned_campus(int zones) {
  std::vector<Zone> zone_list;
  std::vector<Building> buildings;
  std::vector<AccessPoint> aps;
  for (int z = 0; z < zones; ++z) {
    const std::string zid = "Z" + std::to_string(z);
    zone_list.push_back({zid, "Zone " + std::to_string(z)});
    for (int b = 0; b < 2; ++b) {
      const std::string bid = zid + "B" + std::to_string(b);
      buildings.push_back({bid, "Building " + bid, zid, 22.0 + z * 0.001, 114.0 + b * 0.001, Category::academic,
                           z == 0 && b == 0});
      aps.push_back({"AP-" + bid, bid});
    }
  }
  return Registry::create(std::move(zone_list), std::move(buildings), std::move(aps));
}

struct RandomLog {
  std::vector<std::string> lines;
  std::size_t valid_lines = 0;    // parse cleanly (known AP or not)
  std::size_t unknown_ap = 0;     // valid lines naming an AP outside the registry
  std::size_t malformed = 0;
};

/// Random small log: up to `max_devices` devices and `max_events` lines over
/// roughly `horizon` seconds, with occasional unknown APs and garbage lines.
inline RandomLog random_log(std::uint64_t seed, const Registry& registry, int max_devices = 50,
                            int max_events = 500, std::int64_t horizon = 6 * 3600) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  std::vector<std::string> aps;
  for (const auto& [id, ap] : registry.aps()) aps.push_back(id);

  const auto devices = uniform(1, max_devices);
  const auto events = uniform(0, max_events);
  RandomLog log;
  for (std::int64_t i = 0; i < events; ++i) {
    const auto roll = uniform(0, 99);
    if (roll < 3) {
      log.lines.push_back(roll == 0 ? "{\"ts\":12" : roll == 1 ? "not json" : "{\"ts\":-4,\"dev\":\"d\",\"ap\":\"x\",\"ev\":\"poll\"}");
      ++log.malformed;
      continue;
    }
    AssociationEvent event;
    // Clustered timestamps make same-second ties and short gaps common.
    event.ts = 1554076800 + uniform(0, horizon / 60) * 60 + uniform(0, 3) * uniform(0, 1) * 17;
    event.device_id = "dev" + std::to_string(uniform(0, devices - 1));
    event.ap_id = roll < 6 ? "AP-UNKNOWN" : aps[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(aps.size()) - 1))];
    const auto kind = uniform(0, 9);
    event.kind = kind < 3 ? EventKind::connect : kind < 9 ? EventKind::poll : EventKind::disconnect;
    log.lines.push_back(format_event_line(event));
    ++log.valid_lines;
    if (roll < 6) ++log.unknown_ap;
  }
  return log;
}

inline std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& line : lines) out += line + "\n";
  return out;
}

}  // namespace pulse::testing
