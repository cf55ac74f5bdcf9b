#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pulse/movement.hpp"
#include "pulse/occupancy.hpp"
#include "pulse/registry.hpp"

namespace pulse {

/// Totals per zone, descending, ties by ascending zone id. Zones without
/// occupancy are listed with zero. Throws Error(unknown_building).
std::vector<RankEntry> zone_ranking(const BuildingCounts& counts, const Registry& registry);

enum class CrowdLevel { quiet, moderate, busy, crowded, packed };

const char* to_string(CrowdLevel level);
std::optional<CrowdLevel> crowd_level_from_string(std::string_view text);

inline constexpr std::int64_t kBaselineFloor = 50;

/// Ratio of count to max(baseline_max, 50) cut at 0.2/0.4/0.6/0.8, each band
/// closed below and open above.
CrowdLevel crowd_level(std::int64_t count, std::int64_t baseline_max);

}  // namespace pulse
