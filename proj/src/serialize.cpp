#include "pulse/serialize.hpp"

#include "json.hpp"

namespace pulse {

namespace {

using json = nlohmann::ordered_json;

// ---- writers ---------------------------------------------------------------

json series_json(const OccupancySeries& series) {
  return {{"building_id", series.building_id},
          {"bin_start", series.bin_start},
          {"bin_width", series.bin_width},
          {"counts", series.counts}};
}

json peaks_json(const std::vector<Peak>& peaks) {
  json out = json::array();
  for (const Peak& peak : peaks) out.push_back({{"ts", peak.ts}, {"count", peak.count}});
  return out;
}

json edges_json(const EdgeCounts& edges) {
  json out = json::array();
  for (const auto& [edge, count] : edges) out.push_back({{"from", edge.first}, {"to", edge.second}, {"count", count}});
  return out;
}

json rank_json(const std::vector<RankEntry>& entries, const char* id_field, const char* count_field) {
  json out = json::array();
  for (const auto& entry : entries) out.push_back({{id_field, entry.id}, {count_field, entry.count}});
  return out;
}

json rgb_json(const Rgb& color) { return json::array({color.r, color.g, color.b}); }

json ladder_json(const std::vector<LadderEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries) out.push_back({{"building_id", e.building_id}, {"name", e.name}, {"count", e.count}});
  return out;
}

json snapshot_json(const Snapshot& s) {
  json doc;
  doc["at"] = s.at;
  doc["per_building_count"] = json::object();
  for (const auto& [id, count] : s.per_building_count) doc["per_building_count"][id] = count;
  doc["zone_ranking"] = rank_json(s.zone_ranking, "zone_id", "total");
  doc["per_building_level"] = json::object();
  for (const auto& [id, level] : s.per_building_level) doc["per_building_level"][id] = to_string(level);
  doc["history_24h"] = json::object();
  for (const auto& [id, series] : s.history_24h) doc["history_24h"][id] = series_json(series);
  doc["peaks"] = json::object();
  for (const auto& [id, peaks] : s.peaks) doc["peaks"][id] = peaks_json(peaks);
  doc["total_series"] = series_json(s.total_series);
  doc["forecast_series"] = series_json(s.forecast_series);
  doc["movement"] = {{"window_start", s.movement.window_start},
                     {"window_end", s.movement.window_end},
                     {"building_counts", edges_json(s.movement.building_counts)},
                     {"zone_counts", edges_json(s.movement.zone_counts)}};
  doc["ladder_in"] = rank_json(s.ladder_in, "building_id", "count");
  doc["ladder_out"] = rank_json(s.ladder_out, "building_id", "count");
  return doc;
}

json payload_json(const DisplayPayload& p) {
  json doc;
  doc["generated_at"] = p.generated_at;

  doc["map_points"] = json::array();
  for (const auto& point : p.map_points) {
    doc["map_points"].push_back({{"building_id", point.building_id},
                                 {"name", point.name},
                                 {"latitude", point.latitude},
                                 {"longitude", point.longitude},
                                 {"base_height", point.base_height},
                                 {"bounce_amplitude_ratio", point.bounce_amplitude_ratio},
                                 {"bounce_period", point.bounce_period},
                                 {"bounce_phase", point.bounce_phase},
                                 {"color", rgb_json(point.color)},
                                 {"level", to_string(point.level)},
                                 {"count", point.count}});
  }

  json panels = json::array();
  for (const auto& panel : p.popup_rotation.panels) {
    json table = json::array();
    for (const auto& row : panel.peak_table) {
      table.push_back({{"ts", row.ts}, {"time_label", row.time_label}, {"count", row.count}});
    }
    panels.push_back({{"building_id", panel.building_id},
                      {"name", panel.name},
                      {"icon", to_string(panel.icon)},
                      {"count", panel.count},
                      {"level", to_string(panel.level)},
                      {"series_24h", series_json(panel.series_24h)},
                      {"peak_marks", peaks_json(panel.peak_marks)},
                      {"peak_table", std::move(table)},
                      {"pin", {{"latitude", panel.pin_latitude}, {"longitude", panel.pin_longitude}}}});
  }
  doc["popup_rotation"] = {{"dwell_seconds", p.popup_rotation.dwell_seconds}, {"panels", std::move(panels)}};

  doc["zone_ranking"] = json::array();
  for (const auto& bar : p.zone_ranking) {
    doc["zone_ranking"].push_back({{"zone_id", bar.zone_id},
                                   {"zone_name", bar.zone_name},
                                   {"total", bar.total},
                                   {"bar_color", rgb_json(bar.bar_color)}});
  }

  doc["totals"] = {{"bin_start", p.totals.bin_start},
                   {"bin_width", p.totals.bin_width},
                   {"values", p.totals.values},
                   {"boundary_index", p.totals.boundary_index}};

  json anchors = json::array();
  for (const auto& a : p.chord.anchors) {
    anchors.push_back({{"from_zone", a.from_zone},
                       {"to_zone", a.to_zone},
                       {"count", a.count},
                       {"highlighted", a.highlighted},
                       {"redundancy_text", a.redundancy_text}});
  }
  doc["chord"] = {{"zone_ids", p.chord.zone_ids},
                  {"zone_names", p.chord.zone_names},
                  {"matrix", p.chord.matrix},
                  {"anchors", std::move(anchors)}};

  doc["ladders"] = {{"in", ladder_json(p.ladder_in)}, {"out", ladder_json(p.ladder_out)}};
  return doc;
}

// ---- readers ---------------------------------------------------------------

json parse_document(std::string_view text, const char* what) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::parse_error, std::string(what) + ": not valid JSON");
  return doc;
}

template <class Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string(what) + ": " + e.what());
  }
}

OccupancySeries read_series(const json& j) {
  return {j.at("building_id").get<std::string>(), j.at("bin_start").get<Timestamp>(),
          j.at("bin_width").get<Seconds>(), j.at("counts").get<std::vector<std::int64_t>>()};
}

std::vector<Peak> read_peaks(const json& j) {
  std::vector<Peak> out;
  for (const auto& p : j) out.push_back({p.at("ts").get<Timestamp>(), p.at("count").get<std::int64_t>()});
  return out;
}

EdgeCounts read_edges(const json& j) {
  EdgeCounts out;
  for (const auto& e : j) {
    out[{e.at("from").get<std::string>(), e.at("to").get<std::string>()}] = e.at("count").get<std::int64_t>();
  }
  return out;
}

std::vector<RankEntry> read_rank(const json& j, const char* id_field, const char* count_field) {
  std::vector<RankEntry> out;
  for (const auto& e : j) out.push_back({e.at(id_field).get<std::string>(), e.at(count_field).get<std::int64_t>()});
  return out;
}

CrowdLevel read_level(const json& j) {
  auto level = crowd_level_from_string(j.get<std::string>());
  if (!level) throw Error(ErrorKind::parse_error, "unknown crowd level " + j.get<std::string>());
  return *level;
}

Rgb read_rgb(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::parse_error, "color must be [r, g, b]");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

std::vector<LadderEntry> read_ladder(const json& j) {
  std::vector<LadderEntry> out;
  for (const auto& e : j) {
    out.push_back({e.at("building_id").get<std::string>(), e.at("name").get<std::string>(),
                   e.at("count").get<std::int64_t>()});
  }
  return out;
}

Snapshot read_snapshot(const json& doc) {
  Snapshot s;
  s.at = doc.at("at").get<Timestamp>();
  for (const auto& [id, count] : doc.at("per_building_count").items()) s.per_building_count[id] = count.get<std::int64_t>();
  s.zone_ranking = read_rank(doc.at("zone_ranking"), "zone_id", "total");
  for (const auto& [id, level] : doc.at("per_building_level").items()) s.per_building_level[id] = read_level(level);
  for (const auto& [id, series] : doc.at("history_24h").items()) s.history_24h[id] = read_series(series);
  for (const auto& [id, peaks] : doc.at("peaks").items()) s.peaks[id] = read_peaks(peaks);
  s.total_series = read_series(doc.at("total_series"));
  s.forecast_series = read_series(doc.at("forecast_series"));
  const json& movement = doc.at("movement");
  s.movement.window_start = movement.at("window_start").get<Timestamp>();
  s.movement.window_end = movement.at("window_end").get<Timestamp>();
  s.movement.building_counts = read_edges(movement.at("building_counts"));
  s.movement.zone_counts = read_edges(movement.at("zone_counts"));
  s.ladder_in = read_rank(doc.at("ladder_in"), "building_id", "count");
  s.ladder_out = read_rank(doc.at("ladder_out"), "building_id", "count");
  return s;
}

DisplayPayload read_payload(const json& doc) {
  DisplayPayload p;
  p.generated_at = doc.at("generated_at").get<Timestamp>();
  for (const auto& j : doc.at("map_points")) {
    MapPointEncoding point;
    point.building_id = j.at("building_id").get<std::string>();
    point.name = j.at("name").get<std::string>();
    point.latitude = j.at("latitude").get<double>();
    point.longitude = j.at("longitude").get<double>();
    point.base_height = j.at("base_height").get<double>();
    point.bounce_amplitude_ratio = j.at("bounce_amplitude_ratio").get<double>();
    point.bounce_period = j.at("bounce_period").get<double>();
    point.bounce_phase = j.at("bounce_phase").get<double>();
    point.color = read_rgb(j.at("color"));
    point.level = read_level(j.at("level"));
    point.count = j.at("count").get<std::int64_t>();
    p.map_points.push_back(std::move(point));
  }

  const json& rotation = doc.at("popup_rotation");
  p.popup_rotation.dwell_seconds = rotation.at("dwell_seconds").get<Seconds>();
  for (const auto& j : rotation.at("panels")) {
    PopupPanel panel;
    panel.building_id = j.at("building_id").get<std::string>();
    panel.name = j.at("name").get<std::string>();
    auto icon = category_from_string(j.at("icon").get<std::string>());
    if (!icon) throw Error(ErrorKind::parse_error, "unknown icon category");
    panel.icon = *icon;
    panel.count = j.at("count").get<std::int64_t>();
    panel.level = read_level(j.at("level"));
    panel.series_24h = read_series(j.at("series_24h"));
    panel.peak_marks = read_peaks(j.at("peak_marks"));
    for (const auto& row : j.at("peak_table")) {
      panel.peak_table.push_back({row.at("ts").get<Timestamp>(), row.at("time_label").get<std::string>(),
                                  row.at("count").get<std::int64_t>()});
    }
    panel.pin_latitude = j.at("pin").at("latitude").get<double>();
    panel.pin_longitude = j.at("pin").at("longitude").get<double>();
    p.popup_rotation.panels.push_back(std::move(panel));
  }

  for (const auto& j : doc.at("zone_ranking")) {
    p.zone_ranking.push_back({j.at("zone_id").get<std::string>(), j.at("zone_name").get<std::string>(),
                              j.at("total").get<std::int64_t>(), read_rgb(j.at("bar_color"))});
  }

  const json& totals = doc.at("totals");
  p.totals.bin_start = totals.at("bin_start").get<Timestamp>();
  p.totals.bin_width = totals.at("bin_width").get<Seconds>();
  p.totals.values = totals.at("values").get<std::vector<std::int64_t>>();
  p.totals.boundary_index = totals.at("boundary_index").get<std::size_t>();

  const json& chord = doc.at("chord");
  p.chord.zone_ids = chord.at("zone_ids").get<std::vector<std::string>>();
  p.chord.zone_names = chord.at("zone_names").get<std::vector<std::string>>();
  p.chord.matrix = chord.at("matrix").get<std::vector<std::vector<std::int64_t>>>();
  for (const auto& a : chord.at("anchors")) {
    p.chord.anchors.push_back({a.at("from_zone").get<std::string>(), a.at("to_zone").get<std::string>(),
                               a.at("count").get<std::int64_t>(), a.at("highlighted").get<bool>(),
                               a.at("redundancy_text").get<std::string>()});
  }

  p.ladder_in = read_ladder(doc.at("ladders").at("in"));
  p.ladder_out = read_ladder(doc.at("ladders").at("out"));
  return p;
}

}  // namespace

std::string serialize_series(const OccupancySeries& series) { return series_json(series).dump(); }

OccupancySeries parse_series(std::string_view text) {
  return guarded("series", [&] { return read_series(parse_document(text, "series")); });
}

std::string serialize_snapshot(const Snapshot& snapshot, int indent) { return snapshot_json(snapshot).dump(indent); }

Snapshot parse_snapshot(std::string_view text) {
  return guarded("snapshot", [&] { return read_snapshot(parse_document(text, "snapshot")); });
}

std::string serialize_payload(const DisplayPayload& payload) { return payload_json(payload).dump(); }

DisplayPayload parse_payload(std::string_view text) {
  return guarded("payload", [&] { return read_payload(parse_document(text, "payload")); });
}

std::string serialize_envelope(const PayloadEnvelope& envelope) {
  json doc;
  doc["schema_version"] = envelope.schema_version;
  doc["payload"] = payload_json(envelope.payload);
  doc["virtual_now"] = envelope.virtual_now;
  return doc.dump();
}

PayloadEnvelope parse_envelope(std::string_view text) {
  return guarded("envelope", [&] {
    json doc = parse_document(text, "envelope");
    PayloadEnvelope envelope;
    envelope.schema_version = doc.at("schema_version").get<std::string>();
    if (envelope.schema_version != kSchemaVersion) {
      throw Error(ErrorKind::parse_error, "envelope: unsupported schema_version " + envelope.schema_version);
    }
    envelope.payload = read_payload(doc.at("payload"));
    envelope.virtual_now = doc.at("virtual_now").get<Timestamp>();
    return envelope;
  });
}

}  // namespace pulse
