#include "http_server.hpp"

#include <httplib.h>

#include "frc/error.hpp"

namespace frc::http {

struct Server::Impl {
  DraftService& service;
  httplib::Server server;

  explicit Impl(DraftService& s) : service(s) {}

  void dispatch(const httplib::Request& req, httplib::Response& res) {
    ServiceRequest request;
    request.method = req.method;
    request.path = req.path;
    request.body = req.body;
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    const ServiceResponse response = service.handle(request);
    res.status = response.status;
    res.set_content(response.body.dump(), "application/json");
  }
};

Server::Server(DraftService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svr = impl_->server;
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  // httplib also sets SO_REUSEPORT, which would let a second server share
  // the port silently. Address reuse alone is enough for quick restarts.
  svr.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->dispatch(req, res); };
  svr.Get(".*", handler);
  svr.Post(".*", handler);
  svr.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void Server::listen() { impl_->server.listen_after_bind(); }

void Server::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool Server::running() const { return impl_->server.is_running(); }

}  // namespace frc::http
