#include "pulse/ranking.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace pulse {

std::vector<RankEntry> zone_ranking(const BuildingCounts& counts, const Registry& registry) {
  std::map<std::string, std::int64_t> totals;
  for (const auto& [id, zone] : registry.zones()) totals.emplace(id, 0);
  for (const auto& [building_id, count] : counts) totals[zone_of(registry, building_id).id] += count;

  std::vector<RankEntry> ranking;
  ranking.reserve(totals.size());
  for (const auto& [id, total] : totals) ranking.push_back({id, total});
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const RankEntry& a, const RankEntry& b) { return a.count > b.count; });
  return ranking;
}

const char* to_string(CrowdLevel level) {
  switch (level) {
    case CrowdLevel::quiet: return "quiet";
    case CrowdLevel::moderate: return "moderate";
    case CrowdLevel::busy: return "busy";
    case CrowdLevel::crowded: return "crowded";
    case CrowdLevel::packed: return "packed";
  }
  return "quiet";
}

std::optional<CrowdLevel> crowd_level_from_string(std::string_view text) {
  for (auto level : {CrowdLevel::quiet, CrowdLevel::moderate, CrowdLevel::busy, CrowdLevel::crowded,
                     CrowdLevel::packed}) {
    if (text == to_string(level)) return level;
  }
  return std::nullopt;
}

CrowdLevel crowd_level(std::int64_t count, std::int64_t baseline_max) {
  // Compare count * 5 against k * denominator to keep the band edges exact.
  const std::int64_t denominator = std::max(baseline_max, kBaselineFloor);
  const std::int64_t scaled = std::max<std::int64_t>(count, 0) * 5;
  if (scaled < 1 * denominator) return CrowdLevel::quiet;
  if (scaled < 2 * denominator) return CrowdLevel::moderate;
  if (scaled < 3 * denominator) return CrowdLevel::busy;
  if (scaled < 4 * denominator) return CrowdLevel::crowded;
  return CrowdLevel::packed;
}

}  // namespace pulse
