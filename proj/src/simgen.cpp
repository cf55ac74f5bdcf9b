#include "pulse/simgen.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace pulse {

namespace {

constexpr Seconds kHour = 3600;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Distribution helpers written out so the output does not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform01() < p; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(between(0, static_cast<std::int64_t>(items.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

struct Candidates {
  std::vector<const Building*> dormitory;
  std::vector<const Building*> academic;
  std::vector<const Building*> canteen;
  std::vector<const Building*> library;
};

Candidates collect_candidates(const Registry& registry) {
  Candidates out;
  for (const auto& [id, building] : registry.buildings()) {
    if (registry.aps_of(id).empty()) continue;
    switch (building.category) {
      case Category::dormitory: out.dormitory.push_back(&building); break;
      case Category::academic: out.academic.push_back(&building); break;
      case Category::canteen: out.canteen.push_back(&building); break;
      case Category::library: out.library.push_back(&building); break;
      default: break;
    }
  }
  std::string missing;
  auto require = [&missing](const std::vector<const Building*>& list, const char* name) {
    if (list.empty()) missing += missing.empty() ? name : std::string(", ") + name;
  };
  require(out.dormitory, "dormitory");
  require(out.academic, "academic");
  require(out.canteen, "canteen");
  require(out.library, "library");
  if (!missing.empty()) {
    throw Error(ErrorKind::config_error, "simgen: registry needs a building with access points per category: " + missing);
  }
  return out;
}

// Planned presence: building == nullptr means off campus.
struct Slot {
  const Building* building;
  Timestamp start;
  Timestamp end;
};

void plan_blocks(Rng& rng, const Candidates& where, Timestamp from, Timestamp to, std::vector<Slot>& plan) {
  for (Timestamp t = from; t < to;) {
    const Timestamp end = std::min(to, t + rng.between(1, 2) * kHour);
    plan.push_back({rng.pick(where.academic), t, end});
    t = end;
  }
}

void plan_day(Rng& rng, const Candidates& where, const Building* home, Timestamp midnight, std::vector<Slot>& plan) {
  auto at = [midnight](Seconds hour) { return midnight + hour * kHour; };
  plan.push_back({home, at(0), at(9)});
  plan_blocks(rng, where, at(9), at(12), plan);
  if (rng.chance(kCanteenLunchProbability)) {
    plan.push_back({rng.pick(where.canteen), at(12), at(13)});
  } else {
    plan_blocks(rng, where, at(12), at(13), plan);
  }
  plan_blocks(rng, where, at(13), at(17), plan);
  plan.push_back({home, at(17), at(19)});
  plan.push_back({rng.chance(kLibraryEveningProbability) ? rng.pick(where.library) : home, at(19), at(22)});
  plan.push_back({home, at(22), at(24)});
}

std::vector<Slot> merge_slots(const std::vector<Slot>& plan) {
  std::vector<Slot> merged;
  for (const Slot& slot : plan) {
    if (!merged.empty() && merged.back().building == slot.building && merged.back().end == slot.start) {
      merged.back().end = slot.end;
    } else {
      merged.push_back(slot);
    }
  }
  return merged;
}

std::string device_token(std::uint64_t seed, std::int64_t index) {
  // splitmix64 is a bijection, so distinct indices give distinct tokens.
  const std::uint64_t h = splitmix64(seed * 0x100000001b3ULL + static_cast<std::uint64_t>(index));
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buffer);
}

}  // namespace

EventStream generate(const SimConfig& config, const Registry& registry) {
  if (config.devices < 0) throw Error(ErrorKind::config_error, "simgen: devices must be >= 0");
  if (config.days < 1) throw Error(ErrorKind::config_error, "simgen: days must be >= 1");
  const Candidates where = collect_candidates(registry);

  EventStream stream;
  for (std::int64_t index = 0; index < config.devices; ++index) {
    Rng rng(splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1)));
    const std::string device = device_token(config.seed, index);
    const Building* home = rng.chance(kResidentShare) ? rng.pick(where.dormitory) : nullptr;

    std::vector<Slot> plan;
    for (std::int64_t day = 0; day < config.days; ++day) {
      plan_day(rng, where, home, config.start_ts + day * 24 * kHour, plan);
    }

    const Building* previous = nullptr;
    bool first = true;
    for (const Slot& slot : merge_slots(plan)) {
      if (slot.building == nullptr) {
        previous = nullptr;
        first = false;
        continue;
      }
      // Walking between buildings, or arriving from off campus.
      Timestamp start = slot.start;
      if (!first) start += previous != nullptr ? rng.between(180, 720) : rng.between(0, 900);
      first = false;
      previous = slot.building;

      const auto& aps = registry.aps_of(slot.building->id);
      const std::string& ap = rng.pick(aps);
      stream.events.push_back({start, device, ap, EventKind::connect});
      for (Timestamp t = start + kPollInterval + rng.between(-kPollJitter, kPollJitter); t < slot.end;
           t += kPollInterval + rng.between(-kPollJitter, kPollJitter)) {
        stream.events.push_back({t, device, ap, EventKind::poll});
      }
      stream.events.push_back({slot.end, device, ap, EventKind::disconnect});
    }
  }
  sort_events(stream.events);
  return stream;
}

void write_log(const EventStream& stream, std::ostream& out) {
  auto write_all = [&out](const std::vector<AssociationEvent>& events) {
    for (const auto& event : events) out << format_event_line(event) << '\n';
  };
  if (std::is_sorted(stream.events.begin(), stream.events.end(), event_less)) {
    write_all(stream.events);
  } else {
    auto sorted = stream.events;
    sort_events(sorted);
    write_all(sorted);
  }
  if (!out) throw Error(ErrorKind::io_error, "log: write failure");
}

void write_log(const EventStream& stream, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io_error, "log: cannot open " + path.string() + " for writing");
  write_log(stream, out);
  out.flush();
  if (!out) throw Error(ErrorKind::io_error, "log: write failure on " + path.string());
}

}  // namespace pulse
