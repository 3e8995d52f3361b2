// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "sync/server.hpp"

#include <sys/socket.h>

#include <atomic>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <cstdlib>
#include <iostream>
#include <list>
#include <mutex>
#include <thread>

#include "analytics/store.hpp"
#include "common/error.hpp"
#include "sync/api.hpp"
#include "sync/codec.hpp"
#include "sync/live.hpp"

namespace phonic::sync {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

ServerOptions options_from_env(ServerOptions o) {
  if (const char* d = std::getenv("PHONIC_DATA_DIR"); d && *d) o.data_dir = d;
  if (const char* t = std::getenv("PHONIC_TOKEN"); t) o.token = t;
  if (const char* b = std::getenv("PHONIC_BIND"); b && *b) {
    const std::string bind = b;
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) {
      o.bind_address = bind;
    } else {
      o.bind_address = bind.substr(0, colon);
      try {
        const int port = std::stoi(bind.substr(colon + 1));
        if (port < 0 || port > 65535) throw std::out_of_range("port");
        o.port = static_cast<std::uint16_t>(port);
      } catch (const std::exception&) {
        fail(ErrorKind::configuration, "PHONIC_BIND has an invalid port: " + bind);
      }
    }
  }
  return o;
}

namespace {

std::string query_param(const std::string& target, const std::string& key) {
  const auto q = target.find('?');
  if (q == std::string::npos) return {};
  std::size_t at = q + 1;
  while (at <= target.size()) {
    const auto amp = target.find('&', at);
    const auto end = amp == std::string::npos ? target.size() : amp;
    const std::string pair = target.substr(at, end - at);
    const auto eq = pair.find('=');
    if (eq != std::string::npos && pair.substr(0, eq) == key) return percent_decode(pair.substr(eq + 1));
    if (amp == std::string::npos) break;
    at = amp + 1;
  }
  return {};
}

}  // namespace

struct Server::Impl {
  ServerOptions options;
  std::unique_ptr<analytics::SessionStore> store;
  std::unique_ptr<ApiHandler> api;

  asio::io_context ioc;
  std::unique_ptr<tcp::acceptor> acceptor;
  std::thread accept_thread;
  std::atomic<bool> running{false};
  std::uint16_t bound_port = 0;

  std::mutex connections_mutex;
  struct Connection {
    std::shared_ptr<tcp::socket> socket;
    std::thread thread;
    std::atomic<bool> done{false};
  };
  std::list<Connection> connections;

  void accept_loop() {
    while (running) {
      auto socket = std::make_shared<tcp::socket>(ioc);
      beast::error_code ec;
      acceptor->accept(*socket, ec);
      if (ec) {
        if (!running) break;
        continue;
      }
      std::lock_guard lock(connections_mutex);
      reap();
      auto& conn = connections.emplace_back();
      conn.socket = socket;
      conn.thread = std::thread([this, socket, &conn] {
        serve(*socket);
        conn.done = true;
      });
    }
  }

  // Joins finished connection threads; connections_mutex held.
  void reap() {
    for (auto it = connections.begin(); it != connections.end();) {
      if (it->done) {
        it->thread.join();
        it = connections.erase(it);
      } else {
        ++it;
      }
    }
  }

  void serve(tcp::socket& socket) {
    beast::flat_buffer buffer;
    beast::error_code ec;
    for (;;) {
      http::request_parser<http::string_body> parser;
      parser.body_limit(64U << 20);
      http::read(socket, buffer, parser, ec);
      if (ec) break;
      auto req = parser.release();
      if (websocket::is_upgrade(req)) {
        serve_websocket(socket, std::move(req));
        return;
      }
      http::response<http::string_body> res;
      try {
        const auto r = api->handle(std::string(req.method_string()), std::string(req.target()), req.body(),
                                   std::string(req[http::field::authorization]));
        res.result(static_cast<unsigned>(r.status));
        res.body() = r.body.dump();
      } catch (const std::exception& e) {
        res.result(http::status::internal_server_error);
        res.body() = json{{"error", "internal"}, {"message", e.what()}}.dump();
      }
      res.version(req.version());
      res.set(http::field::content_type, "application/json");
      res.set(http::field::server, "phonic");
      res.keep_alive(req.keep_alive());
      res.prepare_payload();
      http::write(socket, res, ec);
      if (ec || !res.keep_alive()) break;
    }
    socket.shutdown(tcp::socket::shutdown_both, ec);
  }

  void serve_websocket(tcp::socket& socket, http::request<http::string_body> req) {
    const std::string target(req.target());
    const std::string path = target.substr(0, target.find('?'));
    const std::string auth(req[http::field::authorization]);
    const bool allowed = api->authorized(auth) || api->authorized(query_param(target, "token"));
    if (path != "/ws/live" || !allowed) {
      http::response<http::string_body> res{path != "/ws/live" ? http::status::not_found : http::status::unauthorized,
                                            req.version()};
      res.set(http::field::content_type, "application/json");
      res.body() = json{{"error", path != "/ws/live" ? "not_found" : "unauthorized"}}.dump();
      res.prepare_payload();
      beast::error_code ec;
      http::write(socket, res, ec);
      socket.shutdown(tcp::socket::shutdown_both, ec);
      return;
    }

    websocket::stream<tcp::socket&> ws(socket);
    beast::error_code ec;
    ws.accept(req, ec);
    if (ec) return;
    ws.binary(true);
    ws.read_message_max(64U << 20);

    LiveSession session(*store);
    FrameDecoder decoder;
    while (!session.closed()) {
      beast::flat_buffer buffer;
      ws.read(buffer, ec);
      if (ec) return;  // client went away; nothing is saved without STOP
      std::vector<json> replies;
      try {
        for (const auto& msg : decoder.push(beast::buffers_to_string(buffer.data()))) {
          for (auto& r : session.handle(msg)) replies.push_back(std::move(r));
          if (session.closed()) break;
        }
      } catch (const Error& e) {
        replies.push_back(error_message(std::string(to_string(e.kind())), e.what()));
        send(ws, replies);
        break;
      }
      if (!send(ws, replies)) return;
    }
    ws.close(websocket::close_code::normal, ec);
  }

  static bool send(websocket::stream<tcp::socket&>& ws, const std::vector<json>& replies) {
    beast::error_code ec;
    for (const auto& r : replies) {
      ws.write(asio::buffer(encode_frame(r)), ec);
      if (ec) return false;
    }
    return true;
  }
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>()) { impl_->options = std::move(options); }

Server::~Server() { stop(); }

void Server::start() {
  if (impl_->running) fail(ErrorKind::state, "server already running");
  auto& s = *impl_;
  s.store = std::make_unique<analytics::SessionStore>(s.options.data_dir);
  s.api = std::make_unique<ApiHandler>(*s.store, load_rules(s.options.data_dir), s.options.token);
  try {
    const auto address = asio::ip::make_address(s.options.bind_address);
    s.acceptor = std::make_unique<tcp::acceptor>(s.ioc);
    const tcp::endpoint endpoint(address, s.options.port);
    s.acceptor->open(endpoint.protocol());
    s.acceptor->set_option(asio::socket_base::reuse_address(true));
    s.acceptor->bind(endpoint);
    s.acceptor->listen();
    s.bound_port = s.acceptor->local_endpoint().port();
  } catch (const boost::system::system_error& e) {
    fail(ErrorKind::io, "cannot listen on " + s.options.bind_address + ":" + std::to_string(s.options.port) + ": " +
                            e.what());
  }
  s.running = true;
  s.accept_thread = std::thread([&s] { s.accept_loop(); });
}

void Server::stop() {
  auto& s = *impl_;
  if (!s.running.exchange(false)) return;
  // Wakes the blocking accept.
  ::shutdown(s.acceptor->native_handle(), SHUT_RDWR);
  s.accept_thread.join();
  beast::error_code ec;
  s.acceptor->close(ec);
  std::lock_guard lock(s.connections_mutex);
  for (auto& c : s.connections) ::shutdown(c.socket->native_handle(), SHUT_RDWR);
  for (auto& c : s.connections) c.thread.join();
  s.connections.clear();
}

std::uint16_t Server::port() const { return impl_->bound_port; }

bool Server::running() const { return impl_->running; }

}  // namespace phonic::sync
