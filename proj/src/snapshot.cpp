#include "pulse/snapshot.hpp"

#include <algorithm>

namespace pulse {

namespace {

// Whole bins between the first observed session and `at`, capped at `max_span`.
std::int64_t observed_bins(const SessionSet& sessions, Timestamp at, Seconds max_span, Seconds bin_width) {
  if (sessions.empty()) return 0;
  const Timestamp first = sessions.earliest_start();
  if (first >= at) return 0;
  const std::int64_t needed = (at - first + bin_width - 1) / bin_width;
  return std::min(needed, max_span / bin_width);
}

void check_params(const SnapshotParams& params) {
  const Seconds w = params.bin_width;
  if (w <= 0 || params.history_span <= 0 || params.history_span % w != 0 || params.forecast_horizon % w != 0 ||
      params.baseline_span % w != 0 || params.forecast_horizon < 0 || params.movement_window <= 0) {
    throw Error(ErrorKind::invalid_span, "snapshot: spans must be positive whole numbers of bins");
  }
}

}  // namespace

Snapshot build_snapshot(const SessionSet& sessions, const Registry& registry, Timestamp at,
                        const SnapshotParams& params) {
  check_params(params);
  const Seconds width = params.bin_width;

  Snapshot snapshot;
  snapshot.at = at;
  snapshot.per_building_count = occupancy_at(sessions, registry, at);
  snapshot.zone_ranking = zone_ranking(snapshot.per_building_count, registry);

  std::map<std::string, std::int64_t> baseline;
  if (const auto bins = observed_bins(sessions, at, params.baseline_span, width); bins > 0) {
    for (const auto& [id, series] : bin_series_by_building(sessions, registry, at - bins * width, at, width)) {
      baseline[id] = *std::max_element(series.counts.begin(), series.counts.end());
    }
  }
  for (const auto& [id, count] : snapshot.per_building_count) {
    snapshot.per_building_level[id] = crowd_level(count, baseline[id]);
  }

  auto recent = bin_series_by_building(sessions, registry, at - params.history_span, at, width);
  for (const Building* building : registry.important_buildings()) {
    auto& series = recent.at(building->id);
    snapshot.peaks[building->id] = detect_peaks(series, params.peak_count, params.peak_min_separation);
    snapshot.history_24h[building->id] = std::move(series);
  }

  snapshot.total_series = bin_series(sessions, kCampusWide, at - params.history_span, at, width);

  OccupancySeries forecast_history{std::string(kCampusWide), at, width, {}};
  if (const auto bins = observed_bins(sessions, at, static_cast<Seconds>(params.forecast_weeks) * kSecondsPerWeek,
                                      width);
      bins > 0) {
    forecast_history = bin_series(sessions, kCampusWide, at - bins * width, at, width);
  }
  snapshot.forecast_series = {std::string(kCampusWide), at, width,
                              forecast(forecast_history, static_cast<std::size_t>(params.forecast_horizon / width),
                                       params.forecast_weeks)};

  snapshot.movement = movement_matrix(sessions, registry, at - params.movement_window, at, params.gap_max);
  auto ladders = top_flux(snapshot.movement, params.ladder_size);
  snapshot.ladder_in = std::move(ladders.incoming);
  snapshot.ladder_out = std::move(ladders.outgoing);
  return snapshot;
}

Snapshot build_snapshot(const EventStream& events, const Registry& registry, Timestamp at,
                        const SnapshotParams& params) {
  return build_snapshot(sessionize(events, registry, params.idle_timeout), registry, at, params);
}

}  // namespace pulse
