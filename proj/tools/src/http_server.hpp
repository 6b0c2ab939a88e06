#pragma once

#include <memory>
#include <string>

#include "frc/service.hpp"

namespace frc::http {

// Serves a DraftService over HTTP/1.1 with JSON bodies. Every route is
// forwarded verbatim; CORS is open so a browser UI on another port can poll.
class Server {
 public:
  explicit Server(DraftService& service);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and returns the bound port (an ephemeral one when port is 0).
  // Throws IoError when the address cannot be bound.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace frc::http
