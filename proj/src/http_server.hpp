#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <boost/asio/io_context.hpp>

#include "pulse/registry.hpp"
#include "pulse/service.hpp"

namespace pulse {

/// Read-only HTTP API and the /api/v1/stream WebSocket, on Boost.Beast.
class HttpServer {
 public:
  HttpServer(const Registry& registry, PayloadHub& hub, Seconds retry_after, const std::string& address,
             std::uint16_t port, unsigned threads = 2);
  ~HttpServer();

  void start();
  void stop();
  std::uint16_t port() const { return port_; }

 private:
  class Listener;

  boost::asio::io_context io_;
  std::shared_ptr<Listener> listener_;
  std::vector<std::thread> threads_;
  unsigned thread_count_;
  std::uint16_t port_ = 0;
};

}  // namespace pulse
