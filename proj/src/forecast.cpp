#include "pulse/forecast.hpp"

#include <numeric>

namespace pulse {

namespace {

std::int64_t rounded_mean(std::int64_t sum, std::int64_t n) { return (2 * sum + n) / (2 * n); }

}  // namespace

std::vector<std::int64_t> forecast(const OccupancySeries& history, std::size_t horizon_bins, std::size_t weeks) {
  const Seconds width = history.bin_width;
  if (width <= 0 || kSecondsPerDay % width != 0) {
    throw Error(ErrorKind::invalid_argument, "forecast: bin width must divide one day");
  }
  const auto& values = history.counts;
  const auto n = static_cast<std::int64_t>(values.size());
  std::vector<std::int64_t> predicted(horizon_bins, 0);
  if (n == 0) return predicted;

  const std::int64_t day_bins = kSecondsPerDay / width;
  const std::int64_t week_bins = kSecondsPerWeek / width;

  // Fallback sums per time-of-day slot, indexed by position modulo day_bins.
  std::vector<std::int64_t> day_sum(static_cast<std::size_t>(day_bins), 0);
  std::vector<std::int64_t> day_n(static_cast<std::size_t>(day_bins), 0);
  for (std::int64_t i = 0; i < n; ++i) {
    day_sum[static_cast<std::size_t>(i % day_bins)] += values[static_cast<std::size_t>(i)];
    ++day_n[static_cast<std::size_t>(i % day_bins)];
  }
  const std::int64_t overall = rounded_mean(std::accumulate(values.begin(), values.end(), std::int64_t{0}), n);

  for (std::size_t b = 0; b < horizon_bins; ++b) {
    const std::int64_t target = n + static_cast<std::int64_t>(b);
    // Latest history index on the same week slot strictly before the history end.
    std::int64_t index = target - ((target - n) / week_bins + 1) * week_bins;
    std::int64_t sum = 0;
    std::int64_t used = 0;
    for (; index >= 0 && used < static_cast<std::int64_t>(weeks); index -= week_bins, ++used) {
      sum += values[static_cast<std::size_t>(index)];
    }
    if (used > 0) {
      predicted[b] = rounded_mean(sum, used);
      continue;
    }
    const auto slot = static_cast<std::size_t>(target % day_bins);
    predicted[b] = day_n[slot] > 0 ? rounded_mean(day_sum[slot], day_n[slot]) : overall;
  }
  return predicted;
}

}  // namespace pulse
