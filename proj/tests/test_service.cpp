#include <doctest.h>

#include <httplib.h>

#include <json.hpp>
#include <thread>

#include "ontorec/service.hpp"
#include "testutil.hpp"

using namespace ontorec;
using nlohmann::json;

namespace {

struct LiveServer {
  ServiceContext ctx;
  httplib::Server server;
  std::thread thread;
  int port = 0;

  explicit LiveServer(ServiceContext context) : ctx(std::move(context)) {
    register_routes(server, ctx);
    port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~LiveServer() {
    server.stop();
    thread.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_keep_alive(true);
    return c;
  }
};

ServiceContext make_context() {
  const Ontology ontology = load_ontology_text(
      "concept g1\nconcept g2\nconcept g3\n"
      "isa g2 g1\nisa g3 g1\n"
      "instance a g1\ninstance b g2\ninstance c g3\ninstance d g1\n");
  ServiceContext ctx;
  ctx.annotations = load_annotations_text("/a\ta\n/b\tb\n/c\tc\n/d\td\n", ontology);
  ctx.matrix = SemanticDistanceMatrix::build(ontology);
  ctx.rules = RuleBase({{{"a", "b"}, "c", 0.1, 0.8},
                        {{"a", "b"}, "d", 0.1, 0.8},
                        {{"b"}, "a", 0.1, 0.4}},
                       RuleParams{0.01, 10, 0.0});
  ctx.defaults.window = 2;
  ctx.defaults.max_results = 10;
  return ctx;
}

}  // namespace

TEST_CASE("recommendations come back ranked") {
  LiveServer live(make_context());
  auto client = live.client();

  const auto res = client.Post("/recommend", json{{"visited", {"/a", "/b"}}}.dump(),
                               "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 200);
  const json body = json::parse(res->body);
  const auto& recs = body.at("recommendations");
  REQUIRE(recs.size() == 2);
  // d is semantically closer to b than c at equal confidence
  CHECK(recs[0].at("instance") == "d");
  CHECK(recs[1].at("instance") == "c");
  CHECK(recs[0].at("urls") == json::array({"/d"}));
  CHECK(recs[0].at("confidence").get<double>() == doctest::Approx(0.8));
}

TEST_CASE("no matching rule yields an empty 200") {
  LiveServer live(make_context());
  auto client = live.client();
  const auto res = client.Post("/recommend", json{{"visited", {"/c"}}}.dump(),
                               "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body).at("recommendations").empty());
}

TEST_CASE("unmapped histories are a 422") {
  LiveServer live(make_context());
  auto client = live.client();
  const auto res = client.Post(
      "/recommend", json{{"visited", {"/nowhere", "/else"}}}.dump(),
      "application/json");
  REQUIRE(res);
  CHECK(res->status == 422);
  CHECK(json::parse(res->body).contains("error"));
}

TEST_CASE("malformed bodies are a 400") {
  LiveServer live(make_context());
  auto client = live.client();

  auto res = client.Post("/recommend", "this is not json", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  res = client.Post("/recommend", json{{"nope", 1}}.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  res = client.Post("/recommend", json{{"visited", {1, 2}}}.dump(),
                    "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  res = client.Post("/recommend",
                    json{{"visited", {"/a", "/b"}}, {"k", -1}}.dump(),
                    "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  res = client.Post("/recommend",
                    json{{"visited", {"/a", "/b"}}, {"threshold", 3.0}}.dump(),
                    "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
}

TEST_CASE("request options narrow the response") {
  LiveServer live(make_context());
  auto client = live.client();

  auto res = client.Post("/recommend",
                         json{{"visited", {"/a", "/b"}}, {"k", 1}}.dump(),
                         "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 200);
  CHECK(json::parse(res->body).at("recommendations").size() == 1);

  res = client.Post("/recommend",
                    json{{"visited", {"/a", "/b"}}, {"threshold", 0.9}}.dump(),
                    "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 200);
  CHECK(json::parse(res->body).at("recommendations").empty());
}

TEST_CASE("visited urls are normalized like the pipeline") {
  LiveServer live(make_context());
  auto client = live.client();
  const auto res = client.Post(
      "/recommend",
      json{{"visited", {"/a?utm=1", "/b/"}}}.dump(), "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 200);
  CHECK_FALSE(json::parse(res->body).at("recommendations").empty());
}

TEST_CASE("health endpoint reports the rule count") {
  LiveServer live(make_context());
  auto client = live.client();
  const auto res = client.Get("/health");
  REQUIRE(res);
  REQUIRE(res->status == 200);
  CHECK(json::parse(res->body).at("rules") == 3);
}

TEST_CASE("concurrent identical requests receive identical responses") {
  LiveServer live(make_context());
  const std::string request = json{{"visited", {"/a", "/b"}}}.dump();

  std::vector<std::string> bodies(8);
  std::vector<std::thread> workers;
  for (size_t i = 0; i < bodies.size(); ++i) {
    workers.emplace_back([&, i] {
      auto client = live.client();
      const auto res = client.Post("/recommend", request, "application/json");
      if (res && res->status == 200) bodies[i] = res->body;
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& body : bodies) {
    CHECK_FALSE(body.empty());
    CHECK(body == bodies[0]);
  }
}
