#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "evgen/engine.hpp"

namespace evgen {

struct HttpResponse {
  int status = 200;
  std::string body;  // always JSON
};

// Routes one request without any socket. `target` is the request path,
// `query_param` and `k_param` are the decoded `q` and `k` parameters (empty
// when absent).
//   GET /v1/health         -> 200 {"status":"ok"}
//   GET /v1/evidence?q=&k= -> 200 EvidenceSet, 400 on a bad query or k,
//                             500 on a data error
HttpResponse handle_request(const Engine& engine, std::string_view method,
                            std::string_view target, const std::string* query_param,
                            const std::string* k_param);

// Blocking HTTP/1.1 server around an Engine. Requests are served on a thread
// pool; the engine is only read after construction.
class EvidenceServer {
 public:
  explicit EvidenceServer(const Engine& engine);
  ~EvidenceServer();
  EvidenceServer(const EvidenceServer&) = delete;
  EvidenceServer& operator=(const EvidenceServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error on failure.
  std::uint16_t bind(const std::string& host, std::uint16_t port);
  // Blocks until stop() is called.
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// "host:port" -> pair. Throws Error on a malformed address.
std::pair<std::string, std::uint16_t> parse_address(std::string_view addr);

}  // namespace evgen
