#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "see/errors.hpp"
#include "see/oracle.hpp"
#include "see/rng.hpp"

using namespace see;
using nlohmann::json;

namespace {

std::shared_ptr<const Model> constant_legit(std::size_t d) {
  return std::make_shared<const Model>(Model::constant(d, ClassLabel::Legitimate));
}

struct Post {
  int status;
  json body;
};

Post post(int port, const std::string& body, const std::string& key = "") {
  httplib::Client cli("127.0.0.1", port);
  httplib::Headers headers;
  if (!key.empty()) headers.emplace("X-Api-Key", key);
  auto res = cli.Post("/predict", headers, body, "application/json");
  REQUIRE(res);
  return {res->status, json::parse(res->body, nullptr, false)};
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("explore budget is enforced") {
  ProbeOracle o = ProbeOracle::local(constant_legit(2), 1);
  std::vector<double> x{0.1, 0.2};
  CHECK(o.predict(x, ProbePhase::Explore) == ClassLabel::Legitimate);
  CHECK(o.probes_used() == 1);
  CHECK_THROWS_AS(o.predict(x, ProbePhase::Explore), BudgetExhausted);
  CHECK(o.probes_used() == 1);
  CHECK(o.remaining() == std::optional<std::size_t>(0));
}

TEST_CASE("seed probes do not draw down the explore budget") {
  ProbeOracle o = ProbeOracle::local(constant_legit(1), 3);
  std::vector<double> x{0.5};
  for (int i = 0; i < 5; ++i) o.predict(x, ProbePhase::Seed);
  CHECK(o.seed_probes_used() == 5);
  CHECK(o.remaining() == std::optional<std::size_t>(3));
  for (int i = 0; i < 3; ++i) o.predict(x, ProbePhase::Explore);
  CHECK(o.ledger().total() == 8);
  CHECK(o.ledger().explore.first.has_value());
}

TEST_CASE("unbudgeted oracle counts every call") {
  ProbeOracle o = ProbeOracle::local(constant_legit(1));
  std::vector<double> x{0.5};
  for (int i = 0; i < 10; ++i) o.predict(x, ProbePhase::Explore);
  CHECK(o.probes_used() == 10);
  CHECK_FALSE(o.remaining().has_value());
}

TEST_CASE("service wire protocol") {
  ServiceOptions opts;
  opts.budget_per_key = 2;
  DefenderService svc(constant_legit(2), opts);
  svc.start();
  const int port = svc.port();
  REQUIRE(port > 0);

  httplib::Client cli("127.0.0.1", port);
  auto health = cli.Get("/health");
  REQUIRE(health);
  CHECK(json::parse(health->body) == json{{"status", "ok"}});

  Post ok = post(port, R"({"features":[0.1,0.9]})", "k");
  CHECK(ok.status == 200);
  CHECK(ok.body == json{{"label", 0}});

  Post bad_dim = post(port, R"({"features":[0.1]})", "other");
  CHECK(bad_dim.status == 422);
  CHECK(bad_dim.body["error"] == "dimension mismatch");
  CHECK(bad_dim.body["expected"] == 2);

  Post malformed = post(port, "not json", "other");
  CHECK(malformed.status == 400);

  CHECK(post(port, R"({"features":[0.2,0.2]})", "k").status == 200);
  Post over = post(port, R"({"features":[0.2,0.2]})", "k");
  CHECK(over.status == 429);
  CHECK(over.body["error"] == "budget exhausted");
  // Other keys keep their own allowance.
  CHECK(post(port, R"({"features":[0.2,0.2]})", "fresh").status == 200);
  svc.stop();
}

TEST_CASE("remote source matches the local model and maps errors") {
  auto model = std::make_shared<const Model>(Model::linear({1.0, -1.0}, 0.0));
  ServiceOptions opts;
  opts.budget_per_key = 50;
  DefenderService svc(model, opts);
  svc.start();

  ProbeOracle remote(std::make_unique<RemoteSource>(svc.endpoint(), 2), 40);
  Rng rng(4);
  for (int i = 0; i < 40; ++i) {
    std::vector<double> x{rng.uniform01(), rng.uniform01()};
    REQUIRE(remote.predict(x, ProbePhase::Explore) == model->predict(x));
  }
  CHECK_THROWS_AS(remote.predict(std::vector<double>{0.1, 0.1}, ProbePhase::Explore),
                  BudgetExhausted);

  std::vector<double> x{0.3, 0.6};
  CHECK(remote_predict(svc.endpoint(), x) == model->predict(x));
  std::vector<double> wrong{0.3};
  CHECK_THROWS_AS(remote_predict(svc.endpoint(), wrong), DimensionMismatch);
  for (int i = 0; i < 9; ++i) remote_predict(svc.endpoint(), x);
  // 40 + 1 + 9 = 50 calls on the default key; the next one is over the cap.
  CHECK_THROWS_AS(remote_predict(svc.endpoint(), x), BudgetExhausted);
  svc.stop();
}

TEST_CASE("unreachable service surfaces a transport error and counts nothing") {
  std::string endpoint;
  {
    DefenderService svc(constant_legit(1), ServiceOptions{});
    svc.start();
    endpoint = svc.endpoint();
    svc.stop();
  }
  RemoteOptions ro;
  ro.max_retries = 1;
  ro.backoff = std::chrono::milliseconds(1);
  ro.timeout = std::chrono::seconds(1);
  ProbeOracle o(std::make_unique<RemoteSource>(endpoint, 1, ro), 5);
  std::vector<double> x{0.5};
  CHECK_THROWS_AS(o.predict(x, ProbePhase::Explore), TransportError);
  CHECK(o.probes_used() == 0);
}

}
