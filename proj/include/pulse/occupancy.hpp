#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pulse/registry.hpp"
#include "pulse/sessions.hpp"

namespace pulse {

inline constexpr Seconds kDefaultBinWidth = 300;

/// Building id used by campus-wide series.
inline constexpr std::string_view kCampusWide = "";

using BuildingCounts = std::map<std::string, std::int64_t>;

/// Distinct devices per building with a session satisfying start <= t < end.
/// Every registered building is present in the result, zero or not.
BuildingCounts occupancy_at(const SessionSet& sessions, const Registry& registry, Timestamp t);

struct OccupancySeries {
  std::string building_id;
  Timestamp bin_start = 0;
  Seconds bin_width = kDefaultBinWidth;
  std::vector<std::int64_t> counts;

  Timestamp bin_ts(std::size_t index) const { return bin_start + static_cast<Timestamp>(index) * bin_width; }
  Timestamp span_end() const { return bin_ts(counts.size()); }

  bool operator==(const OccupancySeries&) const = default;
};

/// Distinct devices whose session intersects each bin [b, b + bin_width).
/// `building_id == kCampusWide` counts devices anywhere on campus.
/// Throws Error(invalid_span) unless span_end > span_start and the span is a
/// whole number of bins.
OccupancySeries bin_series(const SessionSet& sessions, std::string_view building_id, Timestamp span_start,
                           Timestamp span_end, Seconds bin_width = kDefaultBinWidth);

/// bin_series for every registered building in a single pass.
std::map<std::string, OccupancySeries> bin_series_by_building(const SessionSet& sessions, const Registry& registry,
                                                              Timestamp span_start, Timestamp span_end,
                                                              Seconds bin_width = kDefaultBinWidth);

struct Peak {
  Timestamp ts = 0;
  std::int64_t count = 0;

  bool operator==(const Peak&) const = default;
  auto operator<=>(const Peak&) const = default;
};

/// Greedy top-k strict local maxima: highest first (earlier bin on ties),
/// skipping candidates closer than `min_separation_bins` to a selected peak.
/// The first and last bins are never candidates.
std::vector<Peak> detect_peaks(const OccupancySeries& series, std::size_t k = 3,
                               std::size_t min_separation_bins = 6);

}  // namespace pulse
