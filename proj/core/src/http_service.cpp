#include "evgen/http_service.hpp"

#include <charconv>

#include "httplib.h"
#include "json.hpp"

namespace evgen {
namespace {

std::string error_body(const std::string& message) {
  nlohmann::ordered_json o;
  o["error"] = message;
  return o.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace

HttpResponse handle_request(const Engine& engine, std::string_view method,
                            std::string_view target, const std::string* query_param,
                            const std::string* k_param) {
  if (method != "GET") return {405, error_body("method not allowed")};
  if (target == "/v1/health") return {200, R"({"status":"ok"})"};
  if (target != "/v1/evidence") return {404, error_body("not found")};

  if (query_param == nullptr || query_param->empty())
    return {400, error_body("missing query parameter 'q'")};
  std::optional<std::size_t> k;
  if (k_param != nullptr && !k_param->empty()) {
    std::size_t value = 0;
    const char* first = k_param->data();
    const char* last = first + k_param->size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || value == 0)
      return {400, error_body("'k' must be a positive integer")};
    k = value;
  }
  try {
    return {200, to_json(engine.run(*query_param, k))};
  } catch (const QueryError& e) {
    return {400, error_body(e.what())};
  } catch (const Error& e) {
    return {500, error_body(e.what())};
  }
}

struct EvidenceServer::Impl {
  explicit Impl(const Engine& e) : engine(e) {}
  const Engine& engine;
  httplib::Server server;
  bool bound = false;
};

EvidenceServer::EvidenceServer(const Engine& engine)
    : impl_(std::make_unique<Impl>(engine)) {
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    std::string q, k;
    const bool has_q = req.has_param("q");
    const bool has_k = req.has_param("k");
    if (has_q) q = req.get_param_value("q");
    if (has_k) k = req.get_param_value("k");
    auto out = handle_request(impl_->engine, req.method, req.path,
                              has_q ? &q : nullptr, has_k ? &k : nullptr);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  impl_->server.Get(".*", route);
}

EvidenceServer::~EvidenceServer() { stop(); }

std::uint16_t EvidenceServer::bind(const std::string& host, std::uint16_t port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound <= 0)
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  impl_->bound = true;
  return static_cast<std::uint16_t>(bound);
}

void EvidenceServer::listen() {
  if (!impl_->bound) throw Error("listen() before bind()");
  impl_->server.listen_after_bind();
}

void EvidenceServer::stop() {
  if (impl_) impl_->server.stop();
}

bool EvidenceServer::running() const { return impl_->server.is_running(); }

std::pair<std::string, std::uint16_t> parse_address(std::string_view addr) {
  auto colon = addr.rfind(':');
  if (colon == std::string_view::npos || colon == 0)
    throw Error("address must be host:port, got '" + std::string(addr) + "'");
  std::string_view port_text = addr.substr(colon + 1);
  unsigned value = 0;
  auto [ptr, ec] =
      std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || value > 65535)
    throw Error("bad port in address '" + std::string(addr) + "'");
  return {std::string(addr.substr(0, colon)), static_cast<std::uint16_t>(value)};
}

}  // namespace evgen
