#include "pulse/movement.hpp"

#include <algorithm>

namespace pulse {

namespace {

std::vector<RankEntry> top_n(const std::map<std::string, std::int64_t>& totals, std::size_t n) {
  std::vector<RankEntry> ranked;
  for (const auto& [id, count] : totals) {
    if (count > 0) ranked.push_back({id, count});
  }
  // Map iteration is already ascending by id; a stable sort keeps that on ties.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankEntry& a, const RankEntry& b) { return a.count > b.count; });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

}  // namespace

MovementMatrix movement_matrix(const SessionSet& sessions, const Registry& registry, Timestamp window_start,
                               Timestamp window_end, Seconds gap_max) {
  MovementMatrix matrix;
  matrix.window_start = window_start;
  matrix.window_end = window_end;
  for (const auto& track : sessions.tracks()) {
    // Starts are ordered; jump to the first session that could arrive in the window.
    auto arrival = std::partition_point(track.begin(), track.end(),
                                        [window_start](const DeviceSession& s) { return s.start < window_start; });
    if (arrival == track.begin() && arrival != track.end()) ++arrival;
    for (; arrival != track.end() && arrival->start < window_end; ++arrival) {
      const DeviceSession& from = *(arrival - 1);
      const DeviceSession& to = *arrival;
      if (from.building_id == to.building_id) continue;
      const Seconds gap = to.start - from.end;
      if (gap < 0 || gap > gap_max) continue;
      ++matrix.building_counts[{from.building_id, to.building_id}];
    }
  }
  matrix.zone_counts = roll_up_zones(matrix.building_counts, registry);
  return matrix;
}

EdgeCounts roll_up_zones(const EdgeCounts& building_counts, const Registry& registry) {
  EdgeCounts zones;
  for (const auto& [edge, count] : building_counts) {
    const std::string& from_zone = zone_of(registry, edge.first).id;
    const std::string& to_zone = zone_of(registry, edge.second).id;
    if (from_zone != to_zone) zones[{from_zone, to_zone}] += count;
  }
  return zones;
}

FluxLadders top_flux(const MovementMatrix& matrix, std::size_t n) {
  std::map<std::string, std::int64_t> incoming;
  std::map<std::string, std::int64_t> outgoing;
  for (const auto& [edge, count] : matrix.building_counts) {
    outgoing[edge.first] += count;
    incoming[edge.second] += count;
  }
  return {top_n(incoming, n), top_n(outgoing, n)};
}

}  // namespace pulse
