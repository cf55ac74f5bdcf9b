#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "pulse/ingest.hpp"
#include "pulse/registry.hpp"
#include "pulse/sessions.hpp"
#include "pulse/snapshot.hpp"

namespace pulse {

inline constexpr std::uint16_t kDefaultPort = 8080;
inline constexpr Seconds kDefaultRefresh = 60;

struct ServeConfig {
  std::filesystem::path registry_path;
  std::filesystem::path log_path;
  bool replay = false;
  double speed = 1.0;  // virtual seconds per wall second
  Seconds refresh = kDefaultRefresh;
  std::uint16_t port = kDefaultPort;
  std::string bind_address = "0.0.0.0";
  // Replay only: hold the virtual clock until the first stream subscriber
  // connects, so a display sees the replay from its first frame.
  bool await_subscriber = false;
  SnapshotParams snapshot;
};

/// Throws Error(config_error) unless speed > 0 and refresh >= 1.
void validate(const ServeConfig& config);

/// One refresh worth of served state. Never modified after publication.
struct PublishedState {
  Timestamp virtual_now = 0;
  std::string envelope;                      // serialized PayloadEnvelope
  std::shared_ptr<const SessionSet> sessions;  // for history requests
};

using StatePtr = std::shared_ptr<const PublishedState>;

/// Builds the snapshot, payload and envelope for `at`.
StatePtr make_state(const Registry& registry, std::shared_ptr<const SessionSet> sessions, Timestamp at,
                    const SnapshotParams& params = {});

/// Latest-value slot plus fan-out to stream subscribers. A single producer
/// publishes; readers just take the current pointer.
class PayloadHub {
 public:
  using Subscriber = std::function<void(const StatePtr&)>;

  StatePtr latest() const;

  /// Replaces the served state and hands it to every subscriber, in order.
  void publish(StatePtr state);

  /// The current state (if any) is delivered before any later publication.
  std::uint64_t subscribe(Subscriber subscriber);
  void unsubscribe(std::uint64_t id);
  std::size_t subscriber_count() const;

  /// Blocks until someone subscribes or close() is called. True if subscribed.
  bool wait_for_subscriber();
  void close();

 private:
  mutable std::mutex mutex_;
  std::condition_variable changed_;
  StatePtr latest_;
  std::map<std::uint64_t, Subscriber> subscribers_;
  std::uint64_t next_id_ = 1;
  bool closed_ = false;
};

/// Decides when wall time has caught up with a point on the virtual timeline.
class Pacer {
 public:
  virtual ~Pacer() = default;
  /// Waits until `offset` wall seconds after start(). False if stopped.
  virtual bool wait_until(double offset) = 0;
  virtual void start() {}
  virtual void stop() {}
};

class RealtimePacer : public Pacer {
 public:
  bool wait_until(double offset) override;
  void start() override;
  void stop() override;

 private:
  std::mutex mutex_;
  std::condition_variable stopped_cv_;
  std::chrono::steady_clock::time_point origin_ = std::chrono::steady_clock::now();
  bool stopped_ = false;
};

/// Never waits: runs a replay as fast as snapshots can be built.
class InstantPacer : public Pacer {
 public:
  bool wait_until(double) override { return !stopped_; }
  void stop() override { stopped_ = true; }

 private:
  std::atomic<bool> stopped_{false};
};

/// Refresh instants of a replay: first_ts + k*refresh for k >= 1, up to the
/// last event.
std::vector<Timestamp> replay_ticks(const EventStream& events, Seconds refresh);

/// Publishes one state per tick, paced at `speed`. Returns the number published.
std::size_t run_replay(const Registry& registry, std::shared_ptr<const SessionSet> sessions,
                       const std::vector<Timestamp>& ticks, Timestamp first_ts, double speed,
                       const SnapshotParams& params, PayloadHub& hub, Pacer& pacer);

class HttpServer;

/// The daemon: HTTP and stream endpoints plus a refresh thread.
class Service {
 public:
  /// Replay mode uses `events` as the whole log. Live mode ignores it and
  /// tails config.log_path instead.
  Service(ServeConfig config, Registry registry, EventStream events = {},
          std::unique_ptr<Pacer> pacer = nullptr);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the port and starts serving. Throws Error(io_error) if binding fails.
  void start();
  void stop();

  /// Blocks until the refresh thread has finished (replay exhausted or stopped).
  void wait_refresh_done();

  std::uint16_t port() const;
  PayloadHub& hub() { return hub_; }
  std::size_t published() const { return published_; }

 private:
  void refresh_replay();
  void refresh_live();

  ServeConfig config_;
  Registry registry_;
  EventStream events_;
  std::unique_ptr<Pacer> pacer_;
  PayloadHub hub_;
  std::unique_ptr<HttpServer> http_;
  std::thread refresher_;
  std::atomic<std::size_t> published_{0};
  std::atomic<bool> stopping_{false};
};

/// Loads registry and log, runs the daemon until SIGINT or SIGTERM.
/// Returns a process exit code; problems are reported on `err`.
int serve(const ServeConfig& config, std::ostream& out, std::ostream& err);

}  // namespace pulse
