#include <gtest/gtest.h>

#include <thread>

#include "evgen/http_service.hpp"
#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"

namespace evgen {
namespace {

class Http : public ::testing::Test {
 protected:
  testing::TempDir dir;
  Engine engine = Engine::open(testing::mini_config(dir));
};

TEST_F(Http, HandlerRoutes) {
  auto health = handle_request(engine, "GET", "/v1/health", nullptr, nullptr);
  EXPECT_EQ(health.status, 200);
  EXPECT_EQ(health.body, R"({"status":"ok"})");

  std::string q = "diabetes, metformin";
  auto ok = handle_request(engine, "GET", "/v1/evidence", &q, nullptr);
  EXPECT_EQ(ok.status, 200);
  EXPECT_EQ(ok.body, to_json(engine.run(q)));

  std::string k = "1";
  std::string m = "metformin";
  auto limited = handle_request(engine, "GET", "/v1/evidence", &m, &k);
  EXPECT_EQ(nlohmann::json::parse(limited.body)["results"].size(), 1u);

  EXPECT_EQ(handle_request(engine, "GET", "/v1/evidence", nullptr, nullptr).status, 400);
  std::string empty = " , ";
  auto bad = handle_request(engine, "GET", "/v1/evidence", &empty, nullptr);
  EXPECT_EQ(bad.status, 400);
  EXPECT_TRUE(nlohmann::json::parse(bad.body).contains("error"));
  for (std::string bad_k : {"0", "-1", "x", "2x"})
    EXPECT_EQ(handle_request(engine, "GET", "/v1/evidence", &q, &bad_k).status, 400) << bad_k;
  EXPECT_EQ(handle_request(engine, "GET", "/v2/other", nullptr, nullptr).status, 404);
  EXPECT_EQ(handle_request(engine, "POST", "/v1/health", nullptr, nullptr).status, 405);
}

TEST_F(Http, LiveServerOnEphemeralPort) {
  EvidenceServer server(engine);
  const auto port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.listen(); });

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  auto health = client.Get("/v1/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(nlohmann::json::parse(health->body)["status"], "ok");

  auto res = client.Get("/v1/evidence?q=diabetes%2C%20metformin&k=5");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
  EXPECT_EQ(res->body, to_json(engine.run("diabetes, metformin", 5)));

  auto missing = client.Get("/v1/evidence");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 400);

  // Concurrent clients see identical bodies.
  std::vector<std::string> bodies(4);
  std::vector<std::thread> clients;
  for (std::size_t i = 0; i < bodies.size(); ++i)
    clients.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", port);
      if (auto r = c.Get("/v1/evidence?q=metformin")) bodies[i] = r->body;
    });
  for (auto& c : clients) c.join();
  for (const auto& b : bodies) EXPECT_EQ(b, to_json(engine.run("metformin")));

  server.stop();
  loop.join();
}

TEST(HttpAddress, Parsing) {
  EXPECT_EQ(parse_address("127.0.0.1:8080"), std::make_pair(std::string("127.0.0.1"),
                                                            std::uint16_t{8080}));
  EXPECT_EQ(parse_address("localhost:0").second, 0);
  EXPECT_THROW(parse_address("nohost"), Error);
  EXPECT_THROW(parse_address(":80"), Error);
  EXPECT_THROW(parse_address("h:99999"), Error);
  EXPECT_THROW(parse_address("h:8o"), Error);
}

}  // namespace
}  // namespace evgen
