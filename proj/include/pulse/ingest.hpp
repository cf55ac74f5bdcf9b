#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pulse/error.hpp"
#include "pulse/registry.hpp"

namespace pulse {

enum class EventKind { connect, poll, disconnect };

const char* to_string(EventKind kind);

struct AssociationEvent {
  Timestamp ts = 0;
  std::string device_id;  // opaque, hashed upstream
  std::string ap_id;
  EventKind kind = EventKind::connect;

  bool operator==(const AssociationEvent&) const = default;
};

/// Total order used by every event stream: (ts, device, ap, kind).
bool event_less(const AssociationEvent& a, const AssociationEvent& b);

struct EventStream {
  std::vector<AssociationEvent> events;
  std::size_t skipped_unknown_ap = 0;
  std::size_t skipped_malformed = 0;
  std::size_t dropped_late = 0;  // live mode only

  bool operator==(const EventStream&) const = default;
};

/// Parses one `{"ts":..,"dev":..,"ap":..,"ev":..}` record.
/// Throws Error(malformed_line); never crashes on arbitrary input.
AssociationEvent parse_event_line(std::string_view line);

/// Non-throwing variant; `reason` receives the rejection cause when non-null.
std::optional<AssociationEvent> try_parse_event_line(std::string_view line, std::string* reason = nullptr);

/// Canonical single-line serialization (no trailing newline).
std::string format_event_line(const AssociationEvent& event);

/// Reads a whole log. Blank lines are ignored; malformed lines and events on
/// unknown access points are counted, not fatal. Output is fully sorted.
EventStream read_log(std::istream& source, const Registry& registry);
EventStream read_log(const std::filesystem::path& path, const Registry& registry);

void sort_events(std::vector<AssociationEvent>& events);

/// Incremental ingestion for tailing a live log. Events older than
/// watermark - lateness (watermark = newest ts seen) are dropped and counted.
class LiveIngestor {
 public:
  static constexpr Seconds kDefaultLateness = 300;

  explicit LiveIngestor(const Registry& registry, Seconds lateness = kDefaultLateness);

  /// Returns true when the line produced an accepted event.
  bool feed_line(std::string_view line);

  /// Discards accepted events older than `cutoff`.
  void evict_before(Timestamp cutoff);

  const EventStream& stream() const { return stream_; }
  std::optional<Timestamp> watermark() const { return watermark_; }

 private:
  const Registry* registry_;
  Seconds lateness_;
  std::optional<Timestamp> watermark_;
  EventStream stream_;
};

}  // namespace pulse
