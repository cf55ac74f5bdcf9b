#include "pulse/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <tuple>

namespace pulse {

namespace {

int lerp_channel(int from, int to, double t) { return static_cast<int>(std::lround(from + (to - from) * t)); }

}  // namespace

Rgb color_for_count(std::int64_t count) {
  count = std::clamp<std::int64_t>(count, 0, kColorSaturationCount);
  for (std::size_t i = 1; i < std::size(kColorRamp); ++i) {
    const ColorStop& lo = kColorRamp[i - 1];
    const ColorStop& hi = kColorRamp[i];
    if (count <= hi.count) {
      const double t = static_cast<double>(count - lo.count) / static_cast<double>(hi.count - lo.count);
      return {lerp_channel(lo.color.r, hi.color.r, t), lerp_channel(lo.color.g, hi.color.g, t),
              lerp_channel(lo.color.b, hi.color.b, t)};
    }
  }
  return std::rbegin(kColorRamp)->color;
}

double point_height(std::int64_t count, double scale) { return scale * static_cast<double>(count); }

double bounce_height(double base, double t, double period, double phase) {
  return base * (1.0 + kBounceAmplitudeRatio * std::sin(2.0 * std::numbers::pi * t / period + phase));
}

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

double bounce_phase(std::string_view building_id) {
  return static_cast<double>(stable_hash(building_id) % 360) * std::numbers::pi / 180.0;
}

std::string time_label(Timestamp ts) {
  const Timestamp of_day = ((ts % 86400) + 86400) % 86400;
  char buffer[8];
  std::snprintf(buffer, sizeof buffer, "%02d:%02d", static_cast<int>(of_day / 3600),
                static_cast<int>(of_day % 3600 / 60));
  return buffer;
}

std::vector<ChordAnchor> anchor_chords(const MovementMatrix& matrix, const Registry& registry, std::size_t k) {
  std::vector<ChordAnchor> anchors;
  for (const auto& [edge, count] : matrix.zone_counts) {
    if (count > 0) anchors.push_back({edge.first, edge.second, count, false, {}});
  }
  std::sort(anchors.begin(), anchors.end(), [](const ChordAnchor& a, const ChordAnchor& b) {
    return std::tie(b.count, a.from_zone, a.to_zone) < std::tie(a.count, b.from_zone, b.to_zone);
  });
  for (std::size_t i = 0; i < anchors.size() && i < k; ++i) {
    ChordAnchor& anchor = anchors[i];
    const Zone* from = registry.find_zone(anchor.from_zone);
    const Zone* to = registry.find_zone(anchor.to_zone);
    anchor.highlighted = true;
    anchor.redundancy_text = (from ? from->name : anchor.from_zone) + " → " + (to ? to->name : anchor.to_zone) +
                             ": " + std::to_string(anchor.count) + " moved in the last hour";
  }
  return anchors;
}

PopupRotation build_popup_rotation(const Snapshot& snapshot, const Registry& registry, Seconds dwell_seconds) {
  PopupRotation rotation;
  rotation.dwell_seconds = dwell_seconds;
  for (const Building* building : registry.important_buildings()) {
    PopupPanel panel;
    panel.building_id = building->id;
    panel.name = building->name;
    panel.icon = building->category;
    if (auto it = snapshot.per_building_count.find(building->id); it != snapshot.per_building_count.end()) {
      panel.count = it->second;
    }
    if (auto it = snapshot.per_building_level.find(building->id); it != snapshot.per_building_level.end()) {
      panel.level = it->second;
    }
    if (auto it = snapshot.history_24h.find(building->id); it != snapshot.history_24h.end()) {
      panel.series_24h = it->second;
    } else {
      panel.series_24h.building_id = building->id;
    }
    if (auto it = snapshot.peaks.find(building->id); it != snapshot.peaks.end()) panel.peak_marks = it->second;
    for (const Peak& peak : panel.peak_marks) panel.peak_table.push_back({peak.ts, time_label(peak.ts), peak.count});
    panel.pin_latitude = building->latitude;
    panel.pin_longitude = building->longitude;
    rotation.panels.push_back(std::move(panel));
  }
  return rotation;
}

DisplayPayload build_display_payload(const Snapshot& snapshot, const Registry& registry, const EncodingParams& params) {
  DisplayPayload payload;
  payload.generated_at = snapshot.at;

  for (const auto& [id, building] : registry.buildings()) {
    MapPointEncoding point;
    point.building_id = id;
    point.name = building.name;
    point.latitude = building.latitude;
    point.longitude = building.longitude;
    if (auto it = snapshot.per_building_count.find(id); it != snapshot.per_building_count.end()) point.count = it->second;
    if (auto it = snapshot.per_building_level.find(id); it != snapshot.per_building_level.end()) point.level = it->second;
    point.base_height = point_height(point.count, params.height_scale);
    point.bounce_period = params.bounce_period;
    point.bounce_phase = bounce_phase(id);
    point.color = color_for_count(point.count);
    payload.map_points.push_back(std::move(point));
  }

  payload.popup_rotation = build_popup_rotation(snapshot, registry, params.dwell_seconds);

  std::int64_t max_total = 0;
  for (const auto& entry : snapshot.zone_ranking) max_total = std::max(max_total, entry.count);
  for (const auto& entry : snapshot.zone_ranking) {
    const Zone* zone = registry.find_zone(entry.id);
    const std::int64_t rescaled =
        max_total > 0 ? (entry.count * kColorSaturationCount + max_total / 2) / max_total : 0;
    payload.zone_ranking.push_back({entry.id, zone ? zone->name : entry.id, entry.count, color_for_count(rescaled)});
  }

  payload.totals.bin_start = snapshot.total_series.bin_start;
  payload.totals.bin_width = snapshot.total_series.bin_width;
  payload.totals.values = snapshot.total_series.counts;
  payload.totals.boundary_index = payload.totals.values.size();
  payload.totals.values.insert(payload.totals.values.end(), snapshot.forecast_series.counts.begin(),
                               snapshot.forecast_series.counts.end());

  for (const auto& [id, zone] : registry.zones()) {
    payload.chord.zone_ids.push_back(id);
    payload.chord.zone_names.push_back(zone.name);
  }
  const std::size_t zone_count = payload.chord.zone_ids.size();
  payload.chord.matrix.assign(zone_count, std::vector<std::int64_t>(zone_count, 0));
  auto zone_index = [&](const std::string& id) {
    return static_cast<std::size_t>(std::lower_bound(payload.chord.zone_ids.begin(), payload.chord.zone_ids.end(), id) -
                                    payload.chord.zone_ids.begin());
  };
  for (const auto& [edge, count] : snapshot.movement.zone_counts) {
    payload.chord.matrix[zone_index(edge.first)][zone_index(edge.second)] = count;
  }
  payload.chord.anchors = anchor_chords(snapshot.movement, registry, params.anchor_count);

  auto ladder = [&registry](const std::vector<RankEntry>& entries) {
    std::vector<LadderEntry> out;
    for (const auto& entry : entries) {
      const Building* building = registry.find_building(entry.id);
      out.push_back({entry.id, building ? building->name : entry.id, entry.count});
    }
    return out;
  };
  payload.ladder_in = ladder(snapshot.ladder_in);
  payload.ladder_out = ladder(snapshot.ladder_out);
  return payload;
}

}  // namespace pulse
