#pragma once

// Brute-force reference computations. These deliberately avoid the library's
// indexing and grouping paths: they scan everything, every time.

#include <algorithm>
#include <cstdint>
#include <ctime>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pulse/ingest.hpp"
#include "pulse/movement.hpp"
#include "pulse/registry.hpp"
#include "pulse/sessions.hpp"

namespace pulse::testing {

/// Presence straight from events: a device is at building B at time t when
/// its latest event at or before t (stream order) is a connect/poll at B no
/// more than idle_timeout old.
inline std::map<std::string, std::int64_t> occupancy_from_events(const std::vector<AssociationEvent>& events,
                                                                 const Registry& registry, Timestamp t,
                                                                 Seconds idle_timeout) {
  std::map<std::string, const AssociationEvent*> latest;
  for (const auto& event : events) {
    if (event.ts > t) continue;
    if (registry.building_of_ap(event.ap_id) == nullptr) continue;
    latest[event.device_id] = &event;  // events are in stream order
  }
  std::map<std::string, std::int64_t> counts;
  for (const auto& [id, b] : registry.buildings()) counts[id] = 0;
  for (const auto& [device, event] : latest) {
    if (event->kind == EventKind::disconnect) continue;
    if (t < event->ts + idle_timeout) ++counts[registry.building_of_ap(event->ap_id)->id];
  }
  return counts;
}

/// Interval-overlap count: distinct devices with start <= t < end per building.
inline std::map<std::string, std::int64_t> occupancy_from_sessions(const std::vector<DeviceSession>& sessions,
                                                                   const Registry& registry, Timestamp t) {
  std::map<std::string, std::set<std::string>> present;
  for (const auto& s : sessions) {
    if (s.start <= t && t < s.end) present[s.building_id].insert(s.device_id);
  }
  std::map<std::string, std::int64_t> counts;
  for (const auto& [id, b] : registry.buildings()) counts[id] = static_cast<std::int64_t>(present[id].size());
  return counts;
}

/// Per bin, the set of devices with any session overlapping it.
inline std::vector<std::int64_t> series_from_sessions(const std::vector<DeviceSession>& sessions,
                                                      const std::string& building_id, Timestamp span_start,
                                                      Timestamp span_end, Seconds width) {
  std::vector<std::int64_t> counts;
  for (Timestamp b = span_start; b < span_end; b += width) {
    std::set<std::string> devices;
    for (const auto& s : sessions) {
      const bool here = building_id.empty() || s.building_id == building_id;
      if (here && std::max(s.start, b) < std::min(s.end, b + width)) devices.insert(s.device_id);
    }
    counts.push_back(static_cast<std::int64_t>(devices.size()));
  }
  return counts;
}

/// Consecutive pairs found by comparing every session against every other.
/// Sessions are ordered by (start, end), exact ties by list position.
inline EdgeCounts movement_from_sessions(const std::vector<DeviceSession>& sessions, Timestamp window_start,
                                         Timestamp window_end, Seconds gap_max) {
  auto key = [&sessions](std::size_t i) { return std::make_tuple(sessions[i].start, sessions[i].end, i); };
  EdgeCounts counts;
  for (std::size_t a = 0; a < sessions.size(); ++a) {
    for (std::size_t b = 0; b < sessions.size(); ++b) {
      if (sessions[a].device_id != sessions[b].device_id || !(key(a) < key(b))) continue;
      // b must be a's immediate successor: no session of the device in between.
      bool adjacent = true;
      for (std::size_t c = 0; c < sessions.size() && adjacent; ++c) {
        if (sessions[c].device_id == sessions[a].device_id && key(a) < key(c) && key(c) < key(b)) adjacent = false;
      }
      const DeviceSession& from = sessions[a];
      const DeviceSession& to = sessions[b];
      if (!adjacent || from.building_id == to.building_id) continue;
      const Seconds gap = to.start - from.end;
      if (gap < 0 || gap > gap_max) continue;
      if (to.start < window_start || to.start >= window_end) continue;
      ++counts[{from.building_id, to.building_id}];
    }
  }
  return counts;
}

/// Edges whose rank (number of edges beating them) is below k.
inline std::set<Edge> top_edges(const EdgeCounts& edges, std::size_t k) {
  std::set<Edge> out;
  for (const auto& [edge, count] : edges) {
    if (count <= 0) continue;
    std::size_t beaten_by = 0;
    for (const auto& [other, other_count] : edges) {
      if (other_count <= 0 || other == edge) continue;
      if (other_count > count || (other_count == count && other < edge)) ++beaten_by;
    }
    if (beaten_by < k) out.insert(edge);
  }
  return out;
}

/// Seasonal mean recomputed with calendar arithmetic on absolute times.
inline std::vector<std::int64_t> forecast_by_calendar(Timestamp bin_start, Seconds width,
                                                      const std::vector<std::int64_t>& history,
                                                      std::size_t horizon, std::size_t weeks) {
  auto weekday = [](Timestamp t) {
    std::time_t raw = static_cast<std::time_t>(t);
    std::tm parts{};
    gmtime_r(&raw, &parts);
    return parts.tm_wday;
  };
  auto time_of_day = [](Timestamp t) { return ((t % 86400) + 86400) % 86400; };
  auto round_mean = [](const std::vector<std::int64_t>& values) {
    std::int64_t sum = 0;
    for (auto v : values) sum += v;
    const double mean = static_cast<double>(sum) / static_cast<double>(values.size());
    return static_cast<std::int64_t>(mean + 0.5);  // values are non-negative
  };

  std::vector<std::int64_t> out;
  const Timestamp history_end = bin_start + static_cast<Timestamp>(history.size()) * width;
  for (std::size_t b = 0; b < horizon; ++b) {
    const Timestamp target = history_end + static_cast<Timestamp>(b) * width;
    std::vector<std::pair<Timestamp, std::int64_t>> same_week_slot;
    std::vector<std::int64_t> same_day_slot;
    for (std::size_t i = 0; i < history.size(); ++i) {
      const Timestamp t = bin_start + static_cast<Timestamp>(i) * width;
      if (time_of_day(t) != time_of_day(target)) continue;
      same_day_slot.push_back(history[i]);
      if (weekday(t) == weekday(target)) same_week_slot.emplace_back(t, history[i]);
    }
    std::sort(same_week_slot.rbegin(), same_week_slot.rend());
    if (same_week_slot.size() > weeks) same_week_slot.resize(weeks);
    if (!same_week_slot.empty()) {
      std::vector<std::int64_t> values;
      for (const auto& entry : same_week_slot) values.push_back(entry.second);
      out.push_back(round_mean(values));
    } else if (!same_day_slot.empty()) {
      out.push_back(round_mean(same_day_slot));
    } else if (!history.empty()) {
      out.push_back(round_mean(history));
    } else {
      out.push_back(0);
    }
  }
  return out;
}

}  // namespace pulse::testing
