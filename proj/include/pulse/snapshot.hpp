#pragma once

#include <map>
#include <string>
#include <vector>

#include "pulse/forecast.hpp"
#include "pulse/ingest.hpp"
#include "pulse/movement.hpp"
#include "pulse/occupancy.hpp"
#include "pulse/ranking.hpp"
#include "pulse/registry.hpp"
#include "pulse/sessions.hpp"

namespace pulse {

struct SnapshotParams {
  Seconds idle_timeout = kDefaultIdleTimeout;
  Seconds gap_max = kDefaultGapMax;
  Seconds bin_width = kDefaultBinWidth;
  Seconds history_span = kSecondsPerDay;
  Seconds movement_window = 3600;
  Seconds forecast_horizon = kSecondsPerDay;
  Seconds baseline_span = 14 * kSecondsPerDay;
  std::size_t forecast_weeks = kDefaultForecastWeeks;
  std::size_t peak_count = 3;
  std::size_t peak_min_separation = 6;
  std::size_t ladder_size = 5;
};

/// Every statistic shown on the displays, as of one instant.
struct Snapshot {
  Timestamp at = 0;
  BuildingCounts per_building_count;
  std::vector<RankEntry> zone_ranking;
  std::map<std::string, CrowdLevel> per_building_level;
  std::map<std::string, OccupancySeries> history_24h;  // important buildings
  std::map<std::string, std::vector<Peak>> peaks;      // important buildings
  OccupancySeries total_series;                        // campus-wide, trailing history_span
  OccupancySeries forecast_series;                     // campus-wide, next forecast_horizon
  MovementMatrix movement;                             // trailing movement_window
  std::vector<RankEntry> ladder_in;
  std::vector<RankEntry> ladder_out;

  bool operator==(const Snapshot&) const = default;
};

/// Composes the analytics as of `at`. Sessions starting after `at` do not
/// influence the result, so passing a longer stream than needed is harmless.
/// Throws Error(invalid_span) for spans that are not whole bins.
Snapshot build_snapshot(const SessionSet& sessions, const Registry& registry, Timestamp at,
                        const SnapshotParams& params = {});

Snapshot build_snapshot(const EventStream& events, const Registry& registry, Timestamp at,
                        const SnapshotParams& params = {});

}  // namespace pulse
