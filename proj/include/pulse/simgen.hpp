#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "pulse/ingest.hpp"
#include "pulse/registry.hpp"

namespace pulse {

/// 2019-04-01T00:00:00Z, a Monday.
inline constexpr Timestamp kDefaultSimStart = 1554076800;

struct SimConfig {
  std::int64_t devices = 0;
  std::int64_t days = 1;
  std::uint64_t seed = 0;
  Timestamp start_ts = kDefaultSimStart;
};

/// Share of simulated people living in campus dormitories; the rest commute
/// and are off campus overnight.
inline constexpr double kResidentShare = 0.5;
inline constexpr double kCanteenLunchProbability = 0.8;
inline constexpr double kLibraryEveningProbability = 0.4;
inline constexpr Seconds kPollInterval = 300;
inline constexpr Seconds kPollJitter = 60;

/// Synthetic association log for `config.devices` people over `config.days`
/// days. Each person follows a daily schedule: dormitory overnight (residents
/// only), academic blocks of one or two hours from 09:00 to 17:00, the canteen
/// at 12:00-13:00 with probability 0.8 and the library 19:00-22:00 with
/// probability 0.4. Present devices poll every 300 s +/- 60 s.
///
/// A pure function of (config, registry). Throws Error(config_error) for
/// negative devices, days < 1, or a registry lacking a building with access
/// points in any of the dormitory, academic, canteen and library categories.
EventStream generate(const SimConfig& config, const Registry& registry);

/// Writes events in log format, sorted by the stream order.
void write_log(const EventStream& stream, std::ostream& out);
void write_log(const EventStream& stream, const std::filesystem::path& path);

}  // namespace pulse
