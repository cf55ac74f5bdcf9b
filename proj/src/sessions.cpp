#include "pulse/sessions.hpp"

#include <algorithm>
#include <optional>
#include <string_view>
#include <tuple>
#include <unordered_map>

namespace pulse {

namespace {

struct OpenSession {
  const std::string* building_id;
  Timestamp start;
  Timestamp last_seen;
};

}  // namespace

SessionSet SessionSet::from_sessions(std::vector<DeviceSession> sessions) {
  std::sort(sessions.begin(), sessions.end(), [](const DeviceSession& a, const DeviceSession& b) {
    return std::tie(a.device_id, a.start, a.end, a.building_id) <
           std::tie(b.device_id, b.start, b.end, b.building_id);
  });
  SessionSet set;
  for (auto& session : sessions) {
    if (session.end < session.start) {
      throw Error(ErrorKind::invalid_argument, "session of " + session.device_id + " ends before it starts");
    }
    if (set.tracks_.empty() || set.tracks_.back().front().device_id != session.device_id) {
      set.tracks_.emplace_back();
    } else if (set.tracks_.back().back().end > session.start) {
      throw Error(ErrorKind::invalid_argument, "overlapping sessions for device " + session.device_id);
    }
    set.tracks_.back().push_back(std::move(session));
  }
  return set;
}

std::size_t SessionSet::session_count() const {
  std::size_t total = 0;
  for (const auto& track : tracks_) total += track.size();
  return total;
}

Timestamp SessionSet::earliest_start() const {
  std::optional<Timestamp> earliest;
  for (const auto& track : tracks_) {
    earliest = std::min(earliest.value_or(track.front().start), track.front().start);
  }
  return earliest.value_or(0);
}

std::vector<DeviceSession> SessionSet::flatten() const {
  std::vector<DeviceSession> out;
  out.reserve(session_count());
  for (const auto& track : tracks_) out.insert(out.end(), track.begin(), track.end());
  return out;
}

SessionSet sessionize(const EventStream& events, const Registry& registry, Seconds idle_timeout) {
  // Group event indices per device, preserving stream order.
  std::unordered_map<std::string_view, std::vector<std::size_t>> per_device;
  for (std::size_t i = 0; i < events.events.size(); ++i) {
    per_device[events.events[i].device_id].push_back(i);
  }
  std::vector<std::string_view> devices;
  devices.reserve(per_device.size());
  for (const auto& entry : per_device) devices.push_back(entry.first);
  std::sort(devices.begin(), devices.end());

  SessionSet set;
  set.tracks_.reserve(devices.size());
  for (std::string_view device : devices) {
    SessionSet::Track track;
    std::optional<OpenSession> open;
    auto close = [&](Timestamp end) {
      track.push_back({std::string(device), *open->building_id, open->start, end});
      open.reset();
    };

    for (std::size_t index : per_device[device]) {
      const AssociationEvent& event = events.events[index];
      const Building* building = registry.building_of_ap(event.ap_id);
      if (building == nullptr) continue;

      if (open) {
        if (event.ts - open->last_seen > idle_timeout) {
          close(open->last_seen + idle_timeout);
        } else if (*open->building_id != building->id) {
          close(std::min(open->last_seen + idle_timeout, event.ts));
        }
      }

      if (event.kind == EventKind::disconnect) {
        if (open) close(event.ts);
        continue;
      }
      if (open) {
        open->last_seen = event.ts;
      } else {
        open = OpenSession{&building->id, event.ts, event.ts};
      }
    }
    if (open) close(open->last_seen + idle_timeout);
    if (!track.empty()) set.tracks_.push_back(std::move(track));
  }
  return set;
}

}  // namespace pulse
