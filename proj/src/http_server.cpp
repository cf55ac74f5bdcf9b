#include "http_server.hpp"

#include <charconv>
#include <deque>
#include <optional>
#include <string_view>

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "json.hpp"
#include "pulse/occupancy.hpp"
#include "pulse/serialize.hpp"

namespace pulse {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

constexpr std::int64_t kMaxHistoryHours = 168;
// A stream client this far behind is dropped; it can reconnect and resync
// from the latest envelope.
constexpr std::size_t kMaxQueuedFrames = 512;

struct Context {
  const Registry* registry;
  PayloadHub* hub;
  Seconds retry_after;
  std::string registry_json;
};

std::string percent_decode(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      int value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + i + 1, text.data() + i + 3, value, 16);
      if (ec == std::errc{} && ptr == text.data() + i + 3) {
        out += static_cast<char>(value);
        i += 2;
        continue;
      }
    }
    out += text[i];
  }
  return out;
}

std::optional<std::string> query_param(std::string_view query, std::string_view name) {
  while (!query.empty()) {
    const auto amp = query.find('&');
    std::string_view pair = query.substr(0, amp);
    query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
    const auto eq = pair.find('=');
    if (pair.substr(0, eq) == name) {
      return percent_decode(eq == std::string_view::npos ? std::string_view{} : pair.substr(eq + 1));
    }
  }
  return std::nullopt;
}

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

Response make_response(const Request& req, http::status status, std::string body,
                       std::string_view content_type = "application/json") {
  Response res{status, req.version()};
  res.set(http::field::server, "pulse");
  res.set(http::field::content_type, beast::string_view(content_type.data(), content_type.size()));
  res.keep_alive(req.keep_alive());
  res.body() = std::move(body);
  res.prepare_payload();
  return res;
}

Response error_response(const Request& req, http::status status, const std::string& message) {
  return make_response(req, status, nlohmann::json{{"error", message}}.dump());
}

Response cold_response(const Request& req, const Context& ctx) {
  Response res = error_response(req, http::status::service_unavailable, "no snapshot yet; retry shortly");
  res.set(http::field::retry_after, std::to_string(ctx.retry_after));
  return res;
}

Response history_response(const Request& req, const Context& ctx, const std::string& building_id,
                          std::string_view query) {
  if (ctx.registry->find_building(building_id) == nullptr) {
    return error_response(req, http::status::not_found, "unknown building " + building_id);
  }
  std::int64_t hours = 24;
  if (auto raw = query_param(query, "hours")) {
    auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), hours);
    if (ec != std::errc{} || ptr != raw->data() + raw->size()) {
      return error_response(req, http::status::bad_request, "hours must be an integer");
    }
  }
  if (hours < 1 || hours > kMaxHistoryHours) {
    return error_response(req, http::status::bad_request, "hours must be between 1 and 168");
  }
  StatePtr state = ctx.hub->latest();
  if (!state) return cold_response(req, ctx);
  const Timestamp end = state->virtual_now;
  return make_response(req, http::status::ok,
                       serialize_series(bin_series(*state->sessions, building_id, end - hours * 3600, end,
                                                   kDefaultBinWidth)));
}

Response handle(const Request& req, const Context& ctx) {
  if (req.method() != http::verb::get && req.method() != http::verb::head) {
    Response res = error_response(req, http::status::method_not_allowed, "read-only API");
    res.set(http::field::allow, "GET, HEAD");
    return res;
  }
  const std::string_view target(req.target().data(), req.target().size());
  const auto question = target.find('?');
  const std::string_view path = target.substr(0, question);
  const std::string_view query = question == std::string_view::npos ? std::string_view{} : target.substr(question + 1);

  if (path == "/healthz") return make_response(req, http::status::ok, "ok", "text/plain");
  if (path == "/api/v1/payload") {
    StatePtr state = ctx.hub->latest();
    if (!state) return cold_response(req, ctx);
    return make_response(req, http::status::ok, state->envelope);
  }
  if (path == "/api/v1/buildings") return make_response(req, http::status::ok, ctx.registry_json);

  constexpr std::string_view prefix = "/api/v1/buildings/";
  constexpr std::string_view suffix = "/history";
  if (path.size() > prefix.size() + suffix.size() && path.substr(0, prefix.size()) == prefix &&
      path.substr(path.size() - suffix.size()) == suffix) {
    const auto id = path.substr(prefix.size(), path.size() - prefix.size() - suffix.size());
    if (id.find('/') == std::string_view::npos) return history_response(req, ctx, percent_decode(id), query);
  }
  return error_response(req, http::status::not_found, "no such endpoint");
}

class StreamSession : public std::enable_shared_from_this<StreamSession> {
 public:
  StreamSession(tcp::socket&& socket, std::shared_ptr<const Context> ctx) : ws_(std::move(socket)), ctx_(std::move(ctx)) {}

  ~StreamSession() {
    if (subscription_ != 0) ctx_->hub->unsubscribe(subscription_);
  }

  void run(Request req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&StreamSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    std::weak_ptr<StreamSession> weak = shared_from_this();
    auto executor = ws_.get_executor();
    subscription_ = ctx_->hub->subscribe([weak, executor](const StatePtr& state) {
      net::post(executor, [weak, state] {
        if (auto self = weak.lock()) self->enqueue(state);
      });
    });
    read_loop();
  }

  // Inbound frames are ignored; reading keeps control frames flowing and
  // notices when the peer goes away.
  void read_loop() {
    ws_.async_read(inbound_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->close();
        return;
      }
      self->inbound_.consume(self->inbound_.size());
      self->read_loop();
    });
  }

  void enqueue(const StatePtr& state) {
    if (closed_) return;
    if (queue_.size() >= kMaxQueuedFrames) {
      close();
      return;
    }
    queue_.push_back(state);
    if (queue_.size() == 1) write_next();
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()->envelope),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec || self->closed_) {
                        self->close();
                        return;
                      }
                      self->queue_.pop_front();
                      if (!self->queue_.empty()) self->write_next();
                    });
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    if (subscription_ != 0) {
      ctx_->hub->unsubscribe(subscription_);
      subscription_ = 0;
    }
    beast::error_code ignored;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ignored);
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::shared_ptr<const Context> ctx_;
  beast::flat_buffer inbound_;
  std::deque<StatePtr> queue_;
  std::uint64_t subscription_ = 0;
  bool closed_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, std::shared_ptr<const Context> ctx) : stream_(std::move(socket)), ctx_(std::move(ctx)) {}

  void run() {
    net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::read, shared_from_this()));
  }

 private:
  void read() {
    parser_.emplace();
    parser_->body_limit(64 * 1024);
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, *parser_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;
    Request req = parser_->release();
    if (websocket::is_upgrade(req)) {
      const std::string_view target(req.target().data(), req.target().size());
      if (target.substr(0, target.find('?')) == "/api/v1/stream") {
        stream_.expires_never();
        std::make_shared<StreamSession>(stream_.release_socket(), ctx_)->run(std::move(req));
        return;
      }
    }
    auto res = std::make_shared<Response>(handle(req, *ctx_));
    if (req.method() == http::verb::head) res->body().clear();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code write_ec, std::size_t) {
      if (write_ec) return;
      if (!res->keep_alive()) {
        beast::error_code ignored;
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        return;
      }
      self->read();
    });
  }

  beast::tcp_stream stream_;
  std::shared_ptr<const Context> ctx_;
  beast::flat_buffer buffer_;
  std::optional<http::request_parser<http::string_body>> parser_;
};

}  // namespace

class HttpServer::Listener : public std::enable_shared_from_this<Listener> {
 public:
  Listener(net::io_context& io, Context ctx)
      : io_(io), acceptor_(net::make_strand(io)), ctx_(std::make_shared<const Context>(std::move(ctx))) {}

  std::uint16_t bind(const std::string& address, std::uint16_t port) {
    beast::error_code ec;
    const tcp::endpoint endpoint(net::ip::make_address(address, ec), port);
    if (ec) throw Error(ErrorKind::config_error, "invalid bind address " + address);
    acceptor_.open(endpoint.protocol(), ec);
    if (!ec) acceptor_.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor_.bind(endpoint, ec);
    if (!ec) acceptor_.listen(net::socket_base::max_listen_connections, ec);
    if (ec) {
      throw Error(ErrorKind::io_error, "cannot listen on " + address + ":" + std::to_string(port) + ": " + ec.message());
    }
    return acceptor_.local_endpoint().port();
  }

  void accept() {
    acceptor_.async_accept(net::make_strand(io_), [self = shared_from_this()](beast::error_code ec, tcp::socket socket) {
      if (ec == net::error::operation_aborted) return;
      if (!ec) std::make_shared<HttpSession>(std::move(socket), self->ctx_)->run();
      self->accept();
    });
  }

  void close() {
    net::post(acceptor_.get_executor(), [self = shared_from_this()] {
      beast::error_code ignored;
      self->acceptor_.close(ignored);
    });
  }

 private:
  net::io_context& io_;
  tcp::acceptor acceptor_;
  std::shared_ptr<const Context> ctx_;
};

HttpServer::HttpServer(const Registry& registry, PayloadHub& hub, Seconds retry_after, const std::string& address,
                       std::uint16_t port, unsigned threads)
    : thread_count_(threads == 0 ? 1 : threads) {
  listener_ = std::make_shared<Listener>(io_, Context{&registry, &hub, retry_after, serialize_registry(registry)});
  port_ = listener_->bind(address, port);
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::start() {
  listener_->accept();
  for (unsigned i = 0; i < thread_count_; ++i) threads_.emplace_back([this] { io_.run(); });
}

void HttpServer::stop() {
  if (threads_.empty()) return;
  listener_->close();
  io_.stop();
  for (auto& thread : threads_) thread.join();
  threads_.clear();
}

}  // namespace pulse
