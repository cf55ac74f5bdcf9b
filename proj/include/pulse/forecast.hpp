#pragma once

#include <cstdint>
#include <vector>

#include "pulse/occupancy.hpp"

namespace pulse {

inline constexpr Seconds kSecondsPerDay = 86400;
inline constexpr Seconds kSecondsPerWeek = 7 * kSecondsPerDay;
inline constexpr std::size_t kDefaultForecastWeeks = 4;

/// Seasonal hour-of-week mean forecast for the `horizon_bins` bins that follow
/// `history`.
///
/// Each future bin is predicted as the mean, rounded half up, of the most
/// recent `weeks` history bins at the same position in the week. When the
/// history holds no such bin it falls back to every history bin at the same
/// time of day, then to the mean of the whole history, and finally to zero.
/// Slots are matched by distance from the target in whole days or weeks, so
/// the history does not need to start on a day boundary; the bin width must
/// divide one day (Error(invalid_argument) otherwise).
std::vector<std::int64_t> forecast(const OccupancySeries& history, std::size_t horizon_bins,
                                   std::size_t weeks = kDefaultForecastWeeks);

}  // namespace pulse
