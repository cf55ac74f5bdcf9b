#pragma once

#include <string>
#include <vector>

#include "pulse/error.hpp"
#include "pulse/ingest.hpp"
#include "pulse/registry.hpp"

namespace pulse {

inline constexpr Seconds kDefaultIdleTimeout = 600;

/// One device's contiguous presence at one building, half-open [start, end).
struct DeviceSession {
  std::string device_id;
  std::string building_id;
  Timestamp start = 0;
  Timestamp end = 0;

  bool operator==(const DeviceSession&) const = default;
};

/// Sessions grouped by device (ascending device id). Within a group sessions
/// are ordered by start and pairwise disjoint, so ends are ordered too.
class SessionSet {
 public:
  using Track = std::vector<DeviceSession>;

  SessionSet() = default;

  /// Groups arbitrary sessions. Throws Error(invalid_argument) when a session
  /// has end < start or two sessions of the same device overlap.
  static SessionSet from_sessions(std::vector<DeviceSession> sessions);

  const std::vector<Track>& tracks() const { return tracks_; }
  std::size_t session_count() const;
  bool empty() const { return tracks_.empty(); }

  /// Earliest session start, or 0 for an empty set.
  Timestamp earliest_start() const;

  std::vector<DeviceSession> flatten() const;

 private:
  friend SessionSet sessionize(const EventStream&, const Registry&, Seconds);

  std::vector<Track> tracks_;
};

/// Stitches events into per-device sessions. A session at building B is
/// extended by further events at B within `idle_timeout`; it ends at the
/// earliest of last_seen + idle_timeout, an explicit disconnect, or the first
/// event of the device at another building. Events must be ordered.
SessionSet sessionize(const EventStream& events, const Registry& registry,
                      Seconds idle_timeout = kDefaultIdleTimeout);

}  // namespace pulse
