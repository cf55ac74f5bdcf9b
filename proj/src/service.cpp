#include "pulse/service.hpp"

#include <pthread.h>

#include <algorithm>
#include <cmath>
#include <csignal>
#include <fstream>
#include <ostream>

#include "http_server.hpp"
#include "pulse/encoding.hpp"
#include "pulse/serialize.hpp"

namespace pulse {

void validate(const ServeConfig& config) {
  if (!(config.speed > 0.0) || !std::isfinite(config.speed)) {
    throw Error(ErrorKind::config_error, "speed must be a positive number");
  }
  if (config.refresh < 1) throw Error(ErrorKind::config_error, "refresh must be at least 1 second");
}

StatePtr make_state(const Registry& registry, std::shared_ptr<const SessionSet> sessions, Timestamp at,
                    const SnapshotParams& params) {
  auto state = std::make_shared<PublishedState>();
  state->virtual_now = at;
  const Snapshot snapshot = build_snapshot(*sessions, registry, at, params);
  state->envelope = serialize_envelope({std::string(kSchemaVersion), build_display_payload(snapshot, registry), at});
  state->sessions = std::move(sessions);
  return state;
}

StatePtr PayloadHub::latest() const {
  std::lock_guard lock(mutex_);
  return latest_;
}

void PayloadHub::publish(StatePtr state) {
  std::lock_guard lock(mutex_);
  latest_ = std::move(state);
  for (auto& [id, subscriber] : subscribers_) subscriber(latest_);
}

std::uint64_t PayloadHub::subscribe(Subscriber subscriber) {
  std::lock_guard lock(mutex_);
  const std::uint64_t id = next_id_++;
  if (latest_) subscriber(latest_);
  subscribers_.emplace(id, std::move(subscriber));
  changed_.notify_all();
  return id;
}

void PayloadHub::unsubscribe(std::uint64_t id) {
  std::lock_guard lock(mutex_);
  subscribers_.erase(id);
}

std::size_t PayloadHub::subscriber_count() const {
  std::lock_guard lock(mutex_);
  return subscribers_.size();
}

bool PayloadHub::wait_for_subscriber() {
  std::unique_lock lock(mutex_);
  changed_.wait(lock, [this] { return closed_ || !subscribers_.empty(); });
  return !closed_;
}

void PayloadHub::close() {
  std::lock_guard lock(mutex_);
  closed_ = true;
  changed_.notify_all();
}

bool RealtimePacer::wait_until(double offset) {
  const auto deadline =
      origin_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(offset));
  std::unique_lock lock(mutex_);
  stopped_cv_.wait_until(lock, deadline, [this] { return stopped_; });
  return !stopped_;
}

void RealtimePacer::start() {
  std::lock_guard lock(mutex_);
  origin_ = std::chrono::steady_clock::now();
}

void RealtimePacer::stop() {
  std::lock_guard lock(mutex_);
  stopped_ = true;
  stopped_cv_.notify_all();
}

std::vector<Timestamp> replay_ticks(const EventStream& events, Seconds refresh) {
  std::vector<Timestamp> ticks;
  if (events.events.empty() || refresh < 1) return ticks;
  const Timestamp first = events.events.front().ts;
  const Timestamp last = events.events.back().ts;
  for (Timestamp t = first + refresh; t <= last; t += refresh) ticks.push_back(t);
  return ticks;
}

std::size_t run_replay(const Registry& registry, std::shared_ptr<const SessionSet> sessions,
                       const std::vector<Timestamp>& ticks, Timestamp first_ts, double speed,
                       const SnapshotParams& params, PayloadHub& hub, Pacer& pacer) {
  pacer.start();
  std::size_t published = 0;
  for (Timestamp at : ticks) {
    // Deadlines are absolute, so slow refreshes delay later pushes without
    // accumulating drift.
    if (!pacer.wait_until(static_cast<double>(at - first_ts) / speed)) break;
    hub.publish(make_state(registry, sessions, at, params));
    ++published;
  }
  return published;
}

Service::Service(ServeConfig config, Registry registry, EventStream events, std::unique_ptr<Pacer> pacer)
    : config_(std::move(config)),
      registry_(std::move(registry)),
      events_(std::move(events)),
      pacer_(pacer ? std::move(pacer) : std::make_unique<RealtimePacer>()) {
  validate(config_);
}

Service::~Service() { stop(); }

void Service::start() {
  const auto retry_after =
      std::max<Seconds>(1, static_cast<Seconds>(std::ceil(static_cast<double>(config_.refresh) / config_.speed)));
  http_ = std::make_unique<HttpServer>(registry_, hub_, retry_after, config_.bind_address, config_.port);
  http_->start();
  refresher_ = std::thread([this] { config_.replay ? refresh_replay() : refresh_live(); });
}

void Service::stop() {
  if (stopping_.exchange(true)) return;
  pacer_->stop();
  hub_.close();
  if (refresher_.joinable()) refresher_.join();
  if (http_) http_->stop();
}

void Service::wait_refresh_done() {
  if (refresher_.joinable()) refresher_.join();
}

std::uint16_t Service::port() const { return http_ ? http_->port() : 0; }

void Service::refresh_replay() {
  auto sessions = std::make_shared<const SessionSet>(sessionize(events_, registry_, config_.snapshot.idle_timeout));
  const auto ticks = replay_ticks(events_, config_.refresh);
  if (ticks.empty()) return;
  if (config_.await_subscriber && !hub_.wait_for_subscriber()) return;
  published_ = run_replay(registry_, std::move(sessions), ticks, events_.events.front().ts, config_.speed,
                          config_.snapshot, hub_, *pacer_);
}

// Live mode: the virtual clock is the wall clock and the log is tailed.
void Service::refresh_live() {
  LiveIngestor ingestor(registry_);
  std::streamoff offset = 0;
  std::string pending;
  const Seconds retention =
      std::max(config_.snapshot.baseline_span,
               static_cast<Seconds>(config_.snapshot.forecast_weeks) * kSecondsPerWeek) +
      kSecondsPerDay;
  Timestamp last = 0;
  std::size_t published = 0;

  pacer_->start();
  for (std::int64_t k = 0;; ++k) {
    if (!pacer_->wait_until(static_cast<double>(k * config_.refresh))) break;

    if (std::ifstream in(config_.log_path, std::ios::binary); in) {
      in.seekg(0, std::ios::end);
      const std::streamoff size = in.tellg();
      if (size < offset) offset = 0;  // truncated or rotated
      in.seekg(offset);
      std::string chunk(static_cast<std::size_t>(size - offset), '\0');
      in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
      offset = size;
      pending += chunk;
      std::size_t begin = 0;
      for (std::size_t nl; (nl = pending.find('\n', begin)) != std::string::npos; begin = nl + 1) {
        ingestor.feed_line(std::string_view(pending).substr(begin, nl - begin));
      }
      pending.erase(0, begin);  // keep a partial trailing line for next time
    }

    const auto wall = std::chrono::duration_cast<std::chrono::seconds>(
                          std::chrono::system_clock::now().time_since_epoch())
                          .count();
    const Timestamp now = std::max<Timestamp>(wall, last + 1);
    last = now;
    ingestor.evict_before(now - retention);
    EventStream events = ingestor.stream();
    sort_events(events.events);
    auto sessions = std::make_shared<const SessionSet>(sessionize(events, registry_, config_.snapshot.idle_timeout));
    hub_.publish(make_state(registry_, std::move(sessions), now, config_.snapshot));
    published_ = ++published;
  }
}

int serve(const ServeConfig& config, std::ostream& out, std::ostream& err) {
  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    validate(config);
    Registry registry = load_registry(config.registry_path);
    EventStream events;
    if (config.replay) {
      events = read_log(config.log_path, registry);
      if (events.skipped_malformed + events.skipped_unknown_ap > 0) {
        err << "pulse: skipped " << events.skipped_malformed << " malformed line(s) and " << events.skipped_unknown_ap
            << " event(s) from unknown access points\n";
      }
    }
    Service service(config, std::move(registry), std::move(events));
    service.start();
    out << "pulse: serving on " << config.bind_address << ":" << service.port()
        << (config.replay ? " (replay)" : " (live)") << std::endl;
    int received = 0;
    sigwait(&signals, &received);
    service.stop();
    return 0;
  } catch (const Error& e) {
    err << "pulse: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pulse
