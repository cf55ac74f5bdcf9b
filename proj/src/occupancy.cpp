#include "pulse/occupancy.hpp"

#include <algorithm>
#include <limits>

namespace pulse {

namespace {

void check_span(Timestamp span_start, Timestamp span_end, Seconds bin_width) {
  if (bin_width <= 0) throw Error(ErrorKind::invalid_span, "bin width must be positive");
  if (span_end <= span_start) throw Error(ErrorKind::invalid_span, "span end must be after span start");
  if ((span_end - span_start) % bin_width != 0) {
    throw Error(ErrorKind::invalid_span, "span is not a whole number of bins");
  }
}

// First session of a track whose end lies after t (ends are ordered).
SessionSet::Track::const_iterator first_ending_after(const SessionSet::Track& track, Timestamp t) {
  return std::partition_point(track.begin(), track.end(), [t](const DeviceSession& s) { return s.end <= t; });
}

// Accumulates per-bin distinct-device counts as a difference array. Callers
// feed one device at a time, its sessions in time order.
class BinAccumulator {
 public:
  BinAccumulator(Timestamp span_start, Timestamp span_end, Seconds bin_width)
      : span_start_(span_start),
        span_end_(span_end),
        bin_width_(bin_width),
        delta_(static_cast<std::size_t>((span_end - span_start) / bin_width) + 1, 0) {}

  void begin_device() { last_bin_ = -1; }

  void add(Timestamp start, Timestamp end) {
    if (end <= start || end <= span_start_ || start >= span_end_) return;
    std::int64_t first = (std::max(start, span_start_) - span_start_) / bin_width_;
    const std::int64_t last = (std::min(end, span_end_) - 1 - span_start_) / bin_width_;
    first = std::max(first, last_bin_ + 1);
    if (first > last) return;
    ++delta_[static_cast<std::size_t>(first)];
    --delta_[static_cast<std::size_t>(last + 1)];
    last_bin_ = last;
  }

  std::vector<std::int64_t> counts() const {
    std::vector<std::int64_t> out(delta_.size() - 1);
    std::int64_t running = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      running += delta_[i];
      out[i] = running;
    }
    return out;
  }

 private:
  Timestamp span_start_;
  Timestamp span_end_;
  Seconds bin_width_;
  std::vector<std::int64_t> delta_;
  std::int64_t last_bin_ = -1;
};

}  // namespace

BuildingCounts occupancy_at(const SessionSet& sessions, const Registry& registry, Timestamp t) {
  BuildingCounts counts;
  for (const auto& [id, building] : registry.buildings()) counts.emplace(id, 0);
  for (const auto& track : sessions.tracks()) {
    // Sessions of one device are disjoint, so at most one can contain t.
    auto it = first_ending_after(track, t);
    if (it != track.end() && it->start <= t) {
      auto slot = counts.find(it->building_id);
      if (slot != counts.end()) ++slot->second;
    }
  }
  return counts;
}

OccupancySeries bin_series(const SessionSet& sessions, std::string_view building_id, Timestamp span_start,
                           Timestamp span_end, Seconds bin_width) {
  check_span(span_start, span_end, bin_width);
  const bool campus_wide = building_id == kCampusWide;
  BinAccumulator bins(span_start, span_end, bin_width);
  for (const auto& track : sessions.tracks()) {
    bins.begin_device();
    for (auto it = first_ending_after(track, span_start); it != track.end() && it->start < span_end; ++it) {
      if (campus_wide || it->building_id == building_id) bins.add(it->start, it->end);
    }
  }
  return {std::string(building_id), span_start, bin_width, bins.counts()};
}

std::map<std::string, OccupancySeries> bin_series_by_building(const SessionSet& sessions, const Registry& registry,
                                                              Timestamp span_start, Timestamp span_end,
                                                              Seconds bin_width) {
  check_span(span_start, span_end, bin_width);
  std::map<std::string, BinAccumulator> bins;
  for (const auto& [id, building] : registry.buildings()) bins.emplace(id, BinAccumulator(span_start, span_end, bin_width));

  for (const auto& track : sessions.tracks()) {
    for (auto& entry : bins) entry.second.begin_device();
    for (auto it = first_ending_after(track, span_start); it != track.end() && it->start < span_end; ++it) {
      auto slot = bins.find(it->building_id);
      if (slot != bins.end()) slot->second.add(it->start, it->end);
    }
  }

  std::map<std::string, OccupancySeries> out;
  for (const auto& [id, accumulator] : bins) out.emplace(id, OccupancySeries{id, span_start, bin_width, accumulator.counts()});
  return out;
}

std::vector<Peak> detect_peaks(const OccupancySeries& series, std::size_t k, std::size_t min_separation_bins) {
  const auto& counts = series.counts;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i + 1 < counts.size(); ++i) {
    if (counts[i] > counts[i - 1] && counts[i] > counts[i + 1]) candidates.push_back(i);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });

  std::vector<std::size_t> selected;
  for (std::size_t candidate : candidates) {
    if (selected.size() == k) break;
    bool too_close = std::any_of(selected.begin(), selected.end(), [&](std::size_t chosen) {
      std::size_t distance = candidate > chosen ? candidate - chosen : chosen - candidate;
      return distance < min_separation_bins;
    });
    if (!too_close) selected.push_back(candidate);
  }

  std::vector<Peak> peaks;
  peaks.reserve(selected.size());
  for (std::size_t index : selected) peaks.push_back({series.bin_ts(index), counts[index]});
  return peaks;
}

}  // namespace pulse
