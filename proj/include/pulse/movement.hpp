#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pulse/registry.hpp"
#include "pulse/sessions.hpp"

namespace pulse {

inline constexpr Seconds kDefaultGapMax = 1800;

using Edge = std::pair<std::string, std::string>;  // (from, to)
using EdgeCounts = std::map<Edge, std::int64_t>;

struct MovementMatrix {
  Timestamp window_start = 0;
  Timestamp window_end = 0;
  EdgeCounts building_counts;
  EdgeCounts zone_counts;  // roll-up; moves inside one zone are not listed

  bool operator==(const MovementMatrix&) const = default;
};

/// Counts each pair of consecutive sessions of one device (A then B, A != B)
/// whose gap is within [0, gap_max] and whose second session starts inside
/// [window_start, window_end).
MovementMatrix movement_matrix(const SessionSet& sessions, const Registry& registry, Timestamp window_start,
                               Timestamp window_end, Seconds gap_max = kDefaultGapMax);

/// Zone-level roll-up of building transitions, dropping intra-zone moves.
EdgeCounts roll_up_zones(const EdgeCounts& building_counts, const Registry& registry);

struct RankEntry {
  std::string id;
  std::int64_t count = 0;

  bool operator==(const RankEntry&) const = default;
};

struct FluxLadders {
  std::vector<RankEntry> incoming;
  std::vector<RankEntry> outgoing;
};

/// Buildings with the most incoming and outgoing transitions, top `n` each,
/// descending by count then ascending id; zero counts excluded.
FluxLadders top_flux(const MovementMatrix& matrix, std::size_t n = 5);

}  // namespace pulse
