#include "pulse/cli.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "pulse/ingest.hpp"
#include "pulse/serialize.hpp"
#include "pulse/service.hpp"
#include "pulse/simgen.hpp"
#include "pulse/snapshot.hpp"

namespace pulse {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int run_gen(const SimConfig& sim, const std::string& registry_path, const std::string& out_path, std::ostream& out) {
  Registry registry = load_registry(registry_path);
  EventStream stream = generate(sim, registry);
  write_log(stream, std::filesystem::path(out_path));
  out << "wrote " << stream.events.size() << " events to " << out_path << "\n";
  return kExitOk;
}

int run_analyze(const std::string& log_path, const std::string& registry_path, Timestamp at, std::ostream& out,
                std::ostream& err) {
  Registry registry = load_registry(registry_path);
  EventStream events = read_log(std::filesystem::path(log_path), registry);
  if (events.skipped_malformed + events.skipped_unknown_ap > 0) {
    err << "pulse: skipped " << events.skipped_malformed << " malformed line(s) and " << events.skipped_unknown_ap
        << " event(s) from unknown access points\n";
  }
  out << serialize_snapshot(build_snapshot(events, registry, at), 2) << "\n";
  return kExitOk;
}

std::optional<std::uint16_t> parse_port(std::string_view text) {
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value > 65535) return std::nullopt;
  return static_cast<std::uint16_t>(value);
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  Timestamp value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc{} && ptr == text.data() + text.size()) return value;

  // YYYY-MM-DDTHH:MM[:SS] with an optional Z or +00:00 suffix.
  std::tm parts{};
  int consumed = 0;
  const std::string copy(text);
  if (std::sscanf(copy.c_str(), "%4d-%2d-%2d%*1[T ]%2d:%2d%n", &parts.tm_year, &parts.tm_mon, &parts.tm_mday,
                  &parts.tm_hour, &parts.tm_min, &consumed) != 5 || consumed == 0) {
    return std::nullopt;
  }
  std::string_view rest = text.substr(static_cast<std::size_t>(consumed));
  if (rest.size() >= 3 && rest[0] == ':') {
    auto [sec_end, sec_ec] = std::from_chars(rest.data() + 1, rest.data() + 3, parts.tm_sec);
    if (sec_ec != std::errc{} || sec_end != rest.data() + 3) return std::nullopt;
    rest.remove_prefix(3);
  }
  if (rest != "" && rest != "Z" && rest != "+00:00") return std::nullopt;
  if (parts.tm_mon < 1 || parts.tm_mon > 12 || parts.tm_mday < 1 || parts.tm_mday > 31 || parts.tm_hour > 23 ||
      parts.tm_min > 59 || parts.tm_sec > 60) {
    return std::nullopt;
  }
  const int year = parts.tm_year, month = parts.tm_mon, day = parts.tm_mday;
  parts.tm_year -= 1900;
  parts.tm_mon -= 1;
  const Timestamp result = timegm(&parts);
  // timegm normalizes impossible dates such as 02-31; refuse those.
  if (parts.tm_year != year - 1900 || parts.tm_mon != month - 1 || parts.tm_mday != day) return std::nullopt;
  return result;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Campus occupancy analytics and display server", "pulse"};
  app.require_subcommand(1);

  SimConfig sim;
  std::string gen_registry, gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic association log");
  gen->add_option("--devices", sim.devices, "Number of simulated devices")->required()->check(CLI::NonNegativeNumber);
  gen->add_option("--days", sim.days, "Days to simulate")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  gen->add_option("--start", sim.start_ts, "First simulated midnight, unix seconds")->capture_default_str();
  gen->add_option("--registry", gen_registry, "Building registry JSON")->required();
  gen->add_option("--out", gen_out, "Output log path")->required();

  std::string log_path, analyze_registry, at_text;
  auto* analyze = app.add_subcommand("analyze", "Print the snapshot of a log at one instant");
  analyze->add_option("--log", log_path, "Association log")->required();
  analyze->add_option("--registry", analyze_registry, "Building registry JSON")->required();
  analyze->add_option("--at", at_text, "Unix seconds or ISO-8601 UTC time")->required();

  ServeConfig serve_config;
  std::string serve_registry, serve_log;
  std::optional<std::uint16_t> port_flag;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the display payload over HTTP and WebSocket");
  serve_cmd->add_option("--registry", serve_registry, "Building registry JSON")->required();
  serve_cmd->add_option("--log", serve_log, "Association log (replayed, or tailed in live mode)")->required();
  serve_cmd->add_flag("--replay", serve_config.replay, "Replay the log on a virtual clock");
  serve_cmd->add_option("--speed", serve_config.speed, "Virtual seconds per wall second")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--refresh", serve_config.refresh, "Virtual seconds between snapshots")
      ->check(CLI::Range(Seconds{1}, Seconds{86400}))
      ->capture_default_str();
  serve_cmd->add_option("--port", port_flag, "TCP port (overrides PULSE_PORT; default 8080)");
  serve_cmd->add_option("--bind", serve_config.bind_address, "Listen address")->capture_default_str();
  serve_cmd->add_flag("--await-subscriber", serve_config.await_subscriber,
                      "Replay: start the clock when the first stream client connects");

  // Help and usage text refer to the subcommand being parsed, if any.
  auto context = [&app]() -> const CLI::App* {
    for (const CLI::App* sub : app.get_subcommands()) return sub;
    return &app;
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << context()->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pulse: " << e.what() << "\n" << context()->help();
    return kExitUsage;
  }

  try {
    if (*gen) return run_gen(sim, gen_registry, gen_out, out);
    if (*analyze) {
      auto at = parse_timestamp(at_text);
      if (!at) {
        err << "pulse: --at: cannot parse '" << at_text << "' (expected unix seconds or YYYY-MM-DDTHH:MM:SSZ)\n";
        return kExitUsage;
      }
      return run_analyze(log_path, analyze_registry, *at, out, err);
    }
    serve_config.registry_path = serve_registry;
    serve_config.log_path = serve_log;
    if (port_flag) {
      serve_config.port = *port_flag;
    } else if (const char* env = std::getenv("PULSE_PORT"); env != nullptr && *env != '\0') {
      auto port = parse_port(env);
      if (!port) {
        err << "pulse: PULSE_PORT is not a valid port: " << env << "\n";
        return kExitUsage;
      }
      serve_config.port = *port;
    }
    return serve(serve_config, out, err);
  } catch (const Error& e) {
    err << "pulse: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "pulse: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace pulse
