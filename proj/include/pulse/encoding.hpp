#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pulse/movement.hpp"
#include "pulse/occupancy.hpp"
#include "pulse/ranking.hpp"
#include "pulse/registry.hpp"
#include "pulse/snapshot.hpp"

namespace pulse {

struct Rgb {
  int r = 0;
  int g = 0;
  int b = 0;

  bool operator==(const Rgb&) const = default;
};

struct ColorStop {
  std::int64_t count;
  Rgb color;
};

/// Map colorway: cool hues close to the satellite basemap for low counts,
/// warm salient hues for busy places. Counts beyond the last stop clamp.
inline constexpr ColorStop kColorRamp[] = {
    {0, {0, 92, 230}},       // blue
    {200, {0, 255, 255}},    // cyan
    {500, {0, 200, 80}},     // green
    {750, {255, 220, 0}},    // yellow
    {1000, {230, 30, 30}},   // red
};
inline constexpr std::int64_t kColorSaturationCount = 1000;

Rgb color_for_count(std::int64_t count);

inline constexpr double kDefaultHeightScale = 0.5;
inline constexpr double kBounceAmplitudeRatio = 0.2;
inline constexpr double kDefaultBouncePeriod = 2.0;

double point_height(std::int64_t count, double scale = kDefaultHeightScale);

/// base * (1 + 0.2 * sin(2*pi*t/period + phase)): oscillates within 80%..120%.
double bounce_height(double base, double t, double period = kDefaultBouncePeriod, double phase = 0.0);

/// FNV-1a 64-bit; stable across runs and platforms.
std::uint64_t stable_hash(std::string_view text);

/// Per-building phase offset in radians: (stable_hash(id) mod 360) degrees.
double bounce_phase(std::string_view building_id);

/// "HH:MM" in UTC.
std::string time_label(Timestamp ts);

struct MapPointEncoding {
  std::string building_id;
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;
  double base_height = 0.0;
  double bounce_amplitude_ratio = kBounceAmplitudeRatio;
  double bounce_period = kDefaultBouncePeriod;
  double bounce_phase = 0.0;
  Rgb color;
  CrowdLevel level = CrowdLevel::quiet;
  std::int64_t count = 0;

  bool operator==(const MapPointEncoding&) const = default;
};

struct ChordAnchor {
  std::string from_zone;
  std::string to_zone;
  std::int64_t count = 0;
  bool highlighted = false;
  std::string redundancy_text;  // empty unless highlighted

  bool operator==(const ChordAnchor&) const = default;
};

inline constexpr std::size_t kDefaultAnchorCount = 10;

/// Every nonzero zone edge, strongest first (ties by ascending (from, to)).
/// The first min(k, edges) are highlighted and carry a text description.
std::vector<ChordAnchor> anchor_chords(const MovementMatrix& matrix, const Registry& registry,
                                       std::size_t k = kDefaultAnchorCount);

struct PeakRow {
  Timestamp ts = 0;
  std::string time_label;
  std::int64_t count = 0;

  bool operator==(const PeakRow&) const = default;
};

struct PopupPanel {
  std::string building_id;
  std::string name;
  Category icon = Category::other;
  std::int64_t count = 0;
  CrowdLevel level = CrowdLevel::quiet;
  OccupancySeries series_24h;
  std::vector<Peak> peak_marks;
  std::vector<PeakRow> peak_table;  // peak_marks in textual form
  double pin_latitude = 0.0;
  double pin_longitude = 0.0;

  bool operator==(const PopupPanel&) const = default;
};

inline constexpr Seconds kDefaultDwellSeconds = 10;

struct PopupRotation {
  std::vector<PopupPanel> panels;
  Seconds dwell_seconds = kDefaultDwellSeconds;

  bool operator==(const PopupRotation&) const = default;
};

/// One panel per important building, ascending id.
PopupRotation build_popup_rotation(const Snapshot& snapshot, const Registry& registry,
                                   Seconds dwell_seconds = kDefaultDwellSeconds);

struct ZoneBar {
  std::string zone_id;
  std::string zone_name;
  std::int64_t total = 0;
  Rgb bar_color;

  bool operator==(const ZoneBar&) const = default;
};

struct TotalsSeries {
  Timestamp bin_start = 0;
  Seconds bin_width = kDefaultBinWidth;
  std::vector<std::int64_t> values;  // history followed by forecast
  std::size_t boundary_index = 0;    // first forecast value

  bool operator==(const TotalsSeries&) const = default;
};

struct ChordView {
  std::vector<std::string> zone_ids;
  std::vector<std::string> zone_names;
  std::vector<std::vector<std::int64_t>> matrix;  // [from][to], zone_ids order
  std::vector<ChordAnchor> anchors;

  bool operator==(const ChordView&) const = default;
};

struct LadderEntry {
  std::string building_id;
  std::string name;
  std::int64_t count = 0;

  bool operator==(const LadderEntry&) const = default;
};

struct DisplayPayload {
  Timestamp generated_at = 0;
  std::vector<MapPointEncoding> map_points;
  PopupRotation popup_rotation;
  std::vector<ZoneBar> zone_ranking;
  TotalsSeries totals;
  ChordView chord;
  std::vector<LadderEntry> ladder_in;
  std::vector<LadderEntry> ladder_out;

  bool operator==(const DisplayPayload&) const = default;
};

struct EncodingParams {
  double height_scale = kDefaultHeightScale;
  double bounce_period = kDefaultBouncePeriod;
  Seconds dwell_seconds = kDefaultDwellSeconds;
  std::size_t anchor_count = kDefaultAnchorCount;
};

DisplayPayload build_display_payload(const Snapshot& snapshot, const Registry& registry,
                                     const EncodingParams& params = {});

}  // namespace pulse
