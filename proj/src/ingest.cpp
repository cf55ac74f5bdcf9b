#include "pulse/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <tuple>

#include "json.hpp"

namespace pulse {

namespace {

using nlohmann::json;

std::optional<EventKind> kind_from_string(std::string_view text) {
  if (text == "connect") return EventKind::connect;
  if (text == "poll") return EventKind::poll;
  if (text == "disconnect") return EventKind::disconnect;
  return std::nullopt;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::optional<AssociationEvent> reject(std::string* reason, const char* why) {
  if (reason != nullptr) *reason = why;
  return std::nullopt;
}

// Strings the writer emits verbatim: printable ASCII without quote or backslash.
bool is_plain(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return c >= 0x20 && c < 0x7f && c != '"' && c != '\\';
  });
}

bool consume(std::string_view& rest, std::string_view token) {
  if (rest.substr(0, token.size()) != token) return false;
  rest.remove_prefix(token.size());
  return true;
}

std::optional<std::string_view> plain_string_until_quote(std::string_view& rest) {
  const auto quote = rest.find('"');
  if (quote == std::string_view::npos) return std::nullopt;
  std::string_view value = rest.substr(0, quote);
  if (!is_plain(value)) return std::nullopt;
  rest.remove_prefix(quote);
  return value;
}

// Lines in exactly the writer's layout skip the general JSON parser, which
// dominates load time on large logs. Anything else returns nullopt and takes
// the general path, so acceptance and rejection are unchanged.
std::optional<AssociationEvent> parse_canonical(std::string_view rest) {
  if (!consume(rest, R"({"ts":)")) return std::nullopt;
  const auto digits = rest.find_first_not_of("0123456789");
  if (digits == 0 || digits == std::string_view::npos || (rest[0] == '0' && digits > 1)) return std::nullopt;
  AssociationEvent event;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + digits, event.ts);
  if (ec != std::errc{}) return std::nullopt;
  rest.remove_prefix(digits);

  if (!consume(rest, R"(,"dev":")")) return std::nullopt;
  auto dev = plain_string_until_quote(rest);
  if (!dev || !consume(rest, R"(","ap":")")) return std::nullopt;
  auto ap = plain_string_until_quote(rest);
  if (!ap || !consume(rest, R"(","ev":")")) return std::nullopt;
  auto ev = plain_string_until_quote(rest);
  if (!ev || rest != R"("})") return std::nullopt;

  auto kind = kind_from_string(*ev);
  if (dev->empty() || ap->empty() || !kind) return std::nullopt;
  event.device_id = *dev;
  event.ap_id = *ap;
  event.kind = *kind;
  return event;
}

}  // namespace

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::connect: return "connect";
    case EventKind::poll: return "poll";
    case EventKind::disconnect: return "disconnect";
  }
  return "connect";
}

bool event_less(const AssociationEvent& a, const AssociationEvent& b) {
  return std::tie(a.ts, a.device_id, a.ap_id, a.kind) < std::tie(b.ts, b.device_id, b.ap_id, b.kind);
}

void sort_events(std::vector<AssociationEvent>& events) {
  if (!std::is_sorted(events.begin(), events.end(), event_less)) {
    std::sort(events.begin(), events.end(), event_less);
  }
}

std::optional<AssociationEvent> try_parse_event_line(std::string_view line, std::string* reason) {
  if (auto event = parse_canonical(line)) return event;
  json record = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (record.is_discarded()) return reject(reason, "not valid JSON");
  if (!record.is_object()) return reject(reason, "record is not an object");

  auto ts = record.find("ts");
  auto dev = record.find("dev");
  auto ap = record.find("ap");
  auto ev = record.find("ev");
  if (ts == record.end() || dev == record.end() || ap == record.end() || ev == record.end()) {
    return reject(reason, "missing field");
  }
  if (!ts->is_number_integer()) return reject(reason, "ts must be an integer");
  if (!dev->is_string() || !ap->is_string() || !ev->is_string()) return reject(reason, "dev/ap/ev must be strings");

  AssociationEvent event;
  if (ts->is_number_unsigned()) {
    auto value = ts->get<std::uint64_t>();
    if (value > static_cast<std::uint64_t>(std::numeric_limits<Timestamp>::max())) return reject(reason, "ts out of range");
    event.ts = static_cast<Timestamp>(value);
  } else {
    event.ts = ts->get<Timestamp>();
  }
  if (event.ts < 0) return reject(reason, "negative ts");

  event.device_id = dev->get<std::string>();
  event.ap_id = ap->get<std::string>();
  if (event.device_id.empty() || event.ap_id.empty()) return reject(reason, "empty dev or ap");

  auto kind = kind_from_string(ev->get_ref<const std::string&>());
  if (!kind) return reject(reason, "unknown event kind");
  event.kind = *kind;
  return event;
}

AssociationEvent parse_event_line(std::string_view line) {
  std::string reason;
  auto event = try_parse_event_line(line, &reason);
  if (!event) throw Error(ErrorKind::malformed_line, "malformed log line: " + reason);
  return *std::move(event);
}

std::string format_event_line(const AssociationEvent& event) {
  if (is_plain(event.device_id) && is_plain(event.ap_id)) {
    std::string line = R"({"ts":)";
    line += std::to_string(event.ts);
    line += R"(,"dev":")";
    line += event.device_id;
    line += R"(","ap":")";
    line += event.ap_id;
    line += R"(","ev":")";
    line += to_string(event.kind);
    line += R"("})";
    return line;
  }
  nlohmann::ordered_json record;
  record["ts"] = event.ts;
  record["dev"] = event.device_id;
  record["ap"] = event.ap_id;
  record["ev"] = to_string(event.kind);
  return record.dump();
}

EventStream read_log(std::istream& source, const Registry& registry) {
  EventStream stream;
  std::string line;
  while (std::getline(source, line)) {
    if (is_blank(line)) continue;
    auto event = try_parse_event_line(line);
    if (!event) {
      ++stream.skipped_malformed;
      continue;
    }
    if (registry.building_of_ap(event->ap_id) == nullptr) {
      ++stream.skipped_unknown_ap;
      continue;
    }
    stream.events.push_back(*std::move(event));
  }
  if (source.bad()) throw Error(ErrorKind::io_error, "log: read failure");
  sort_events(stream.events);
  return stream;
}

EventStream read_log(const std::filesystem::path& path, const Registry& registry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "log: cannot open " + path.string());
  return read_log(in, registry);
}

LiveIngestor::LiveIngestor(const Registry& registry, Seconds lateness)
    : registry_(&registry), lateness_(lateness) {}

bool LiveIngestor::feed_line(std::string_view line) {
  if (is_blank(line)) return false;
  auto event = try_parse_event_line(line);
  if (!event) {
    ++stream_.skipped_malformed;
    return false;
  }
  if (registry_->building_of_ap(event->ap_id) == nullptr) {
    ++stream_.skipped_unknown_ap;
    return false;
  }
  if (watermark_ && event->ts < *watermark_ - lateness_) {
    ++stream_.dropped_late;
    return false;
  }
  watermark_ = std::max(watermark_.value_or(event->ts), event->ts);
  auto& events = stream_.events;
  events.insert(std::upper_bound(events.begin(), events.end(), *event, event_less), *std::move(event));
  return true;
}

void LiveIngestor::evict_before(Timestamp cutoff) {
  auto& events = stream_.events;
  auto first_kept = std::partition_point(events.begin(), events.end(),
                                         [cutoff](const AssociationEvent& e) { return e.ts < cutoff; });
  events.erase(events.begin(), first_kept);
}

}  // namespace pulse
