#include "httplib.h"
#include "neuconj/service/completion.hpp"

namespace neuconj::service {

using nlohmann::json;

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

}  // namespace

HttpServer::HttpServer(CompletionService& service, std::string static_dir)
    : impl_(std::make_unique<Impl>()) {
  auto& server = impl_->server;
  server.set_payload_max_length(1 << 20);

  server.Post("/complete", [&service](const httplib::Request& req, httplib::Response& res) {
    try {
      const json body = json::parse(req.body);
      json out = json::array();
      for (const auto& r : service.complete(request_from_json(body))) out.push_back(to_json(r));
      send_json(res, 200, out);
    } catch (const json::exception& e) {
      send_error(res, 400, std::string("malformed JSON: ") + e.what());
    } catch (const BadRequest& e) {
      send_error(res, 400, e.what());
    } catch (const ServiceUnavailable& e) {
      send_error(res, 503, e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  });

  server.Get("/health", [&service](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, service.health());
  });

  if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
    throw IoError("cannot serve static files from " + static_dir);
  }
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  auto& server = impl_->server;
  if (port == 0) {
    const int bound = server.bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host);
    return bound;
  }
  if (!server.bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace neuconj::service
