// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>

namespace phonic::sync {

struct ServerOptions {
  std::string data_dir = "phonic-data";
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 8080;  // 0 picks a free port
  std::string token;          // empty disables authentication
};

/// Reads PHONIC_DATA_DIR, PHONIC_BIND ("host" or "host:port") and
/// PHONIC_TOKEN over the given defaults.
ServerOptions options_from_env(ServerOptions defaults = {});

/// HTTP/1.1 API plus the /ws/live WebSocket stream. Every connection is
/// served synchronously on its own thread. WebSocket messages are binary
/// and carry [u32 LE length][JSON] frames. Browsers cannot set headers on
/// a WebSocket handshake, so /ws/live also accepts ?token=<token>.
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts accepting in the background.
  void start();
  /// Closes the listener and every open connection, then joins.
  void stop();
  std::uint16_t port() const;
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace phonic::sync
