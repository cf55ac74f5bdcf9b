#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pulse/error.hpp"

namespace pulse {

template <class T>
using KeyedMap = std::map<std::string, T, std::less<>>;

enum class Category { library, canteen, dormitory, academic, sports, administration, other };

const char* to_string(Category category);
std::optional<Category> category_from_string(std::string_view text);

struct Zone {
  std::string id;
  std::string name;

  bool operator==(const Zone&) const = default;
};

struct Building {
  std::string id;
  std::string name;
  std::string zone_id;
  double latitude = 0.0;
  double longitude = 0.0;
  Category category = Category::other;
  bool important = false;

  bool operator==(const Building&) const = default;
};

struct AccessPoint {
  std::string id;
  std::string building_id;

  bool operator==(const AccessPoint&) const = default;
};

/// Campus topology: zones, buildings and access points, cross-validated.
///
/// Only constructible through create() (or load_registry), so every instance
/// satisfies the invariants: unique non-empty ids, coordinates in range,
/// resolvable references and at least one important building. Immutable
/// afterwards and safe to share between threads.
class Registry {
 public:
  /// Throws Error(validation_error) listing every violated invariant.
  static Registry create(std::vector<Zone> zones, std::vector<Building> buildings,
                         std::vector<AccessPoint> aps);

  const KeyedMap<Zone>& zones() const { return zones_; }
  const KeyedMap<Building>& buildings() const { return buildings_; }
  const KeyedMap<AccessPoint>& aps() const { return aps_; }

  const Building* find_building(std::string_view id) const;
  const Zone* find_zone(std::string_view id) const;

  /// Building hosting the access point, or nullptr when the AP is not modeled.
  const Building* building_of_ap(std::string_view ap_id) const;

  /// Access point ids of a building, ascending.
  const std::vector<std::string>& aps_of(std::string_view building_id) const;

  /// Important buildings in ascending id order.
  std::vector<const Building*> important_buildings() const;

  bool operator==(const Registry& other) const {
    return zones_ == other.zones_ && buildings_ == other.buildings_ && aps_ == other.aps_;
  }

 private:
  Registry() = default;

  KeyedMap<Zone> zones_;
  KeyedMap<Building> buildings_;
  KeyedMap<AccessPoint> aps_;
  KeyedMap<std::vector<std::string>> building_aps_;
};

/// Parses and validates a registry document. Parse errors carry the line.
Registry parse_registry(std::string_view text);
Registry load_registry(const std::filesystem::path& path);
std::string serialize_registry(const Registry& registry);

/// Zone owning the building; throws Error(unknown_building).
const Zone& zone_of(const Registry& registry, std::string_view building_id);

}  // namespace pulse
