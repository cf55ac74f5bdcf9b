#include "pulse/registry.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pulse {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::pair<Category, const char*>, 7> kCategoryNames{{
    {Category::library, "library"},
    {Category::canteen, "canteen"},
    {Category::dormitory, "dormitory"},
    {Category::academic, "academic"},
    {Category::sports, "sports"},
    {Category::administration, "administration"},
    {Category::other, "other"},
}};

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

[[noreturn]] void fail_parse(const std::string& message) {
  throw Error(ErrorKind::parse_error, "registry: " + message);
}

const json& require(const json& entry, const char* field, const std::string& where) {
  auto it = entry.find(field);
  if (it == entry.end()) fail_parse(where + ": missing field '" + field + "'");
  return *it;
}

std::string require_string(const json& entry, const char* field, const std::string& where) {
  const json& value = require(entry, field, where);
  if (!value.is_string()) fail_parse(where + ": field '" + field + "' must be a string");
  return value.get<std::string>();
}

double require_number(const json& entry, const char* field, const std::string& where) {
  const json& value = require(entry, field, where);
  if (!value.is_number()) fail_parse(where + ": field '" + field + "' must be a number");
  return value.get<double>();
}

const json& require_array(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end() || !it->is_array()) fail_parse(std::string("top-level array '") + field + "' missing");
  return *it;
}

std::string where(const char* array, std::size_t index) {
  return std::string(array) + "[" + std::to_string(index) + "]";
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::file_missing: return "file-missing";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::validation_error: return "validation-error";
    case ErrorKind::unknown_building: return "unknown-building";
    case ErrorKind::malformed_line: return "malformed-line";
    case ErrorKind::io_error: return "io-error";
    case ErrorKind::config_error: return "config-error";
    case ErrorKind::invalid_span: return "invalid-span";
    case ErrorKind::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

const char* to_string(Category category) {
  for (const auto& [value, name] : kCategoryNames) {
    if (value == category) return name;
  }
  return "other";
}

std::optional<Category> category_from_string(std::string_view text) {
  for (const auto& [value, name] : kCategoryNames) {
    if (text == name) return value;
  }
  return std::nullopt;
}

Registry Registry::create(std::vector<Zone> zones, std::vector<Building> buildings,
                          std::vector<AccessPoint> aps) {
  std::vector<std::string> problems;
  Registry registry;

  for (auto& zone : zones) {
    if (zone.id.empty()) {
      problems.push_back("zone with empty id");
      continue;
    }
    std::string id = zone.id;
    if (!registry.zones_.emplace(id, std::move(zone)).second) {
      problems.push_back("duplicate zone id " + id);
    }
  }

  bool any_important = false;
  for (auto& building : buildings) {
    if (building.id.empty()) {
      problems.push_back("building with empty id");
      continue;
    }
    if (!(building.latitude >= -90.0 && building.latitude <= 90.0)) {
      problems.push_back("building " + building.id + ": latitude out of range");
    }
    if (!(building.longitude >= -180.0 && building.longitude <= 180.0)) {
      problems.push_back("building " + building.id + ": longitude out of range");
    }
    if (!registry.zones_.contains(building.zone_id)) {
      problems.push_back("building " + building.id + " -> zone " + building.zone_id + ": unknown zone");
    }
    any_important = any_important || building.important;
    std::string id = building.id;
    if (!registry.buildings_.emplace(id, std::move(building)).second) {
      problems.push_back("duplicate building id " + id);
    }
  }

  for (auto& ap : aps) {
    if (ap.id.empty()) {
      problems.push_back("access point with empty id");
      continue;
    }
    if (!registry.buildings_.contains(ap.building_id)) {
      problems.push_back("access point " + ap.id + " -> building " + ap.building_id + ": unknown building");
    }
    std::string id = ap.id;
    if (!registry.aps_.emplace(id, std::move(ap)).second) {
      problems.push_back("duplicate access point id " + id);
    }
  }

  if (!any_important) problems.push_back("no important facilities");

  if (!problems.empty()) {
    std::ostringstream message;
    message << "registry invalid (" << problems.size() << " problem" << (problems.size() == 1 ? "" : "s") << ")";
    for (const auto& problem : problems) message << "\n  " << problem;
    throw Error(ErrorKind::validation_error, message.str());
  }

  for (const auto& building : registry.buildings_) registry.building_aps_[building.first];
  for (const auto& [id, ap] : registry.aps_) registry.building_aps_[ap.building_id].push_back(id);
  return registry;
}

const Building* Registry::find_building(std::string_view id) const {
  auto it = buildings_.find(id);
  return it == buildings_.end() ? nullptr : &it->second;
}

const Zone* Registry::find_zone(std::string_view id) const {
  auto it = zones_.find(id);
  return it == zones_.end() ? nullptr : &it->second;
}

const Building* Registry::building_of_ap(std::string_view ap_id) const {
  auto it = aps_.find(ap_id);
  return it == aps_.end() ? nullptr : find_building(it->second.building_id);
}

const std::vector<std::string>& Registry::aps_of(std::string_view building_id) const {
  static const std::vector<std::string> kNone;
  auto it = building_aps_.find(building_id);
  return it == building_aps_.end() ? kNone : it->second;
}

std::vector<const Building*> Registry::important_buildings() const {
  std::vector<const Building*> out;
  for (const auto& [id, building] : buildings_) {
    if (building.important) out.push_back(&building);
  }
  return out;
}

Registry parse_registry(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail_parse("line " + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }
  if (!doc.is_object()) fail_parse("document must be a JSON object");

  std::vector<Zone> zones;
  const json& zone_array = require_array(doc, "zones");
  for (std::size_t i = 0; i < zone_array.size(); ++i) {
    const std::string at = where("zones", i);
    if (!zone_array[i].is_object()) fail_parse(at + ": expected an object");
    zones.push_back({require_string(zone_array[i], "id", at), require_string(zone_array[i], "name", at)});
  }

  std::vector<Building> buildings;
  const json& building_array = require_array(doc, "buildings");
  for (std::size_t i = 0; i < building_array.size(); ++i) {
    const std::string at = where("buildings", i);
    const json& entry = building_array[i];
    if (!entry.is_object()) fail_parse(at + ": expected an object");
    Building building;
    building.id = require_string(entry, "id", at);
    building.name = require_string(entry, "name", at);
    building.zone_id = require_string(entry, "zone_id", at);
    building.latitude = require_number(entry, "latitude", at);
    building.longitude = require_number(entry, "longitude", at);
    const std::string category = require_string(entry, "category", at);
    auto parsed = category_from_string(category);
    if (!parsed) fail_parse(at + ": unknown category '" + category + "'");
    building.category = *parsed;
    const json& important = require(entry, "important", at);
    if (!important.is_boolean()) fail_parse(at + ": field 'important' must be a boolean");
    building.important = important.get<bool>();
    buildings.push_back(std::move(building));
  }

  std::vector<AccessPoint> aps;
  const json& ap_array = require_array(doc, "aps");
  for (std::size_t i = 0; i < ap_array.size(); ++i) {
    const std::string at = where("aps", i);
    if (!ap_array[i].is_object()) fail_parse(at + ": expected an object");
    aps.push_back({require_string(ap_array[i], "id", at), require_string(ap_array[i], "building_id", at)});
  }

  return Registry::create(std::move(zones), std::move(buildings), std::move(aps));
}

Registry load_registry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::file_missing, "registry: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_registry(buffer.str());
}

std::string serialize_registry(const Registry& registry) {
  ordered_json doc;
  doc["zones"] = ordered_json::array();
  for (const auto& [id, zone] : registry.zones()) {
    doc["zones"].push_back({{"id", zone.id}, {"name", zone.name}});
  }
  doc["buildings"] = ordered_json::array();
  for (const auto& [id, b] : registry.buildings()) {
    doc["buildings"].push_back({{"id", b.id},
                                {"name", b.name},
                                {"zone_id", b.zone_id},
                                {"latitude", b.latitude},
                                {"longitude", b.longitude},
                                {"category", to_string(b.category)},
                                {"important", b.important}});
  }
  doc["aps"] = ordered_json::array();
  for (const auto& [id, ap] : registry.aps()) {
    doc["aps"].push_back({{"id", ap.id}, {"building_id", ap.building_id}});
  }
  return doc.dump(2) + "\n";
}

const Zone& zone_of(const Registry& registry, std::string_view building_id) {
  const Building* building = registry.find_building(building_id);
  if (building == nullptr) {
    throw Error(ErrorKind::unknown_building, "unknown building " + std::string(building_id));
  }
  return *registry.find_zone(building->zone_id);
}

}  // namespace pulse
