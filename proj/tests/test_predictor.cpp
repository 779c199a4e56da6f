#include <random>

#include "doctest.h"
#include "support.hpp"
#include "toric/distance.hpp"
#include "toric/error.hpp"
#include "toric/predictor.hpp"

using namespace toric;

namespace {

std::string mock(const std::string& args) { return std::string(MOCK_PREDICTOR) + " " + args; }

}  // namespace

TEST_CASE("exact predictor") {
  ExactPredictor p;
  CHECK(p.predict(testing_support::f3_example().generator()) == 2.0);
  CHECK(p.predict(testing_support::f5_example().generator()) == 8.0);
  CHECK(p.predict(build_code(field_new(7), std::vector<LatticePoint>{{0, 0}}).generator()) == 36.0);
  ExactPredictor starved({DistanceBudget::words(1), 1, {}});
  const auto big = build_code(field_new(8), parse_points("(0,1),(0,2),(0,3),(0,5),(1,0),(1,1),(1,5),(1,6),(3,2),(3,3)"));
  CHECK_THROWS_AS(starved.predict(big.generator()), PredictorFailure);
}

TEST_CASE("heuristic predictor is an upper bound") {
  HeuristicPredictor h;
  const auto f = field_new(5);
  CHECK(h.predict(CodeMatrix(f, 5, {{1, 1, 1, 0, 0}, {0, 1, 1, 1, 1}})) <= 3.0);
  // [I | H]: at most 1 + max weight of H
  CHECK(h.predict(CodeMatrix(f, 5, {{1, 0, 2, 3, 0}, {0, 1, 1, 0, 0}})) <= 3.0);

  testing_support::Rng rng(17);
  ExactPredictor exact;
  for (int t = 0; t < 100; ++t) {
    const auto c = testing_support::random_code(5, 1 + rng() % 10, rng);
    const double e = exact.predict(c.generator());
    const double u = h.predict(c.generator());
    CHECK(u >= e);
    CHECK(u <= double(c.n() - c.k() + 1));
  }
  for (unsigned q : {3u, 4u}) {
    for (int t = 0; t < 30; ++t) {
      const auto c = testing_support::random_code(q, 1 + rng() % ((q - 1) * (q - 1)), rng);
      CHECK(h.predict(c.generator()) >= brute_force_distance(c).d);
    }
  }
}

TEST_CASE("protocol parsing") {
  using namespace protocol;
  const auto g = testing_support::f3_example().generator();
  CHECK(encode_request(4, g) == R"({"id":4,"q":3,"rows":[[1,0,0,2],[0,1,0,1],[0,0,1,1]]})");

  CHECK(parse_handshake(R"({"ready":true,"q":5,"model":"toy"})").model == "toy");
  CHECK_THROWS_AS(parse_handshake(R"({"ready":false,"q":5})"), ProtocolViolation);
  CHECK_THROWS_AS(parse_handshake("ready"), ProtocolViolation);

  CHECK(parse_response(R"({"id":3,"d_approx":7.5})", 3).d_approx == 7.5);
  const auto r = parse_response(R"({"id":3,"d_approx":1.25,"probs":[0.0,0.75,0.25]})", 3);
  CHECK(r.probs.size() == 3);
  CHECK_THROWS_AS(parse_response(R"({"id":2,"d_approx":7})", 3), ProtocolViolation);
  CHECK_THROWS_AS(parse_response(R"({"id":3,"d_approx":"7"})", 3), ProtocolViolation);
  CHECK_THROWS_AS(parse_response(R"({"id":3,"d_approx":-1})", 3), ProtocolViolation);
  CHECK_THROWS_AS(parse_response(R"({"id":3,"d_approx":1.0,"probs":[0.5,0.4]})", 3), ProtocolViolation);
  CHECK_THROWS_AS(parse_response(R"({"id":3,"d_approx":0.2,"probs":[0.5,0.5]})", 3), ProtocolViolation);
  CHECK_THROWS_AS(parse_response(R"({"id":3,"d_approx":1.0,"probs":[-0.5,1.5]})", 3), ProtocolViolation);
  CHECK_THROWS_AS(parse_response(R"({"id":3,)", 3), ProtocolViolation);
  try {
    parse_response(R"({"id":3,"error":"oom"})", 3);
    FAIL("expected a predictor failure");
  } catch (const ProtocolViolation&) {
    FAIL("error replies are not protocol violations");
  } catch (const PredictorFailure& e) {
    CHECK(std::string(e.what()).find("oom") != std::string::npos);
  }
}

TEST_CASE("remote predictor round trip") {
  RemotePredictor remote(mock("--q 5"), 5, std::chrono::milliseconds(5000));
  CHECK(remote.model() == "mock");
  testing_support::Rng rng(1);
  std::vector<CodeMatrix> codes;
  for (int i = 0; i < 20; ++i) codes.push_back(testing_support::random_code(5, 1 + rng() % 12, rng).generator());
  for (int i = 0; i < 1000; ++i) {
    const auto& g = codes[static_cast<std::size_t>(i) % codes.size()];
    CHECK(remote.predict(g) == double(g.rows()));
  }
  CHECK(remote.requests() == 1000);
  CHECK_THROWS_AS(remote.predict(testing_support::f3_example().generator()), PredictorFailure);
}

TEST_CASE("remote predictor with probabilities") {
  RemotePredictor remote(mock("--q 5 --mode probs"), 5, std::chrono::milliseconds(5000));
  CHECK(remote.predict(testing_support::f5_example().generator()) == doctest::Approx(5.75));
}

TEST_CASE("remote predictor failure paths") {
  const auto g = testing_support::f5_example().generator();
  const auto short_wait = std::chrono::milliseconds(300);

  CHECK_THROWS_AS(RemotePredictor("/nonexistent/predictor", 5, short_wait), SpawnFailure);
  CHECK_THROWS_AS(RemotePredictor(mock("--q 5 --mode no-handshake"), 5, short_wait), PredictorTimeout);
  CHECK_THROWS_AS(RemotePredictor(mock("--q 5 --mode bad-handshake"), 5, short_wait), ProtocolViolation);
  CHECK_THROWS_AS(RemotePredictor(mock("--q 5 --mode wrong-q"), 5, short_wait), ProtocolViolation);

  {
    RemotePredictor r(mock("--q 5 --mode error --after 2"), 5, short_wait);
    CHECK(r.predict(g) == 6.0);
    CHECK(r.predict(g) == 6.0);
    try {
      r.predict(g);
      FAIL("expected failure");
    } catch (const PredictorFailure& e) {
      CHECK(std::string(e.what()).find("oom") != std::string::npos);
    }
  }
  {
    RemotePredictor r(mock("--q 5 --mode hang --after 1"), 5, short_wait);
    CHECK(r.predict(g) == 6.0);
    try {
      r.predict(g);
      FAIL("expected timeout");
    } catch (const PredictorTimeout& e) {
      CHECK(e.id() == 2);
    }
  }
  {
    RemotePredictor r(mock("--q 5 --mode malformed"), 5, short_wait);
    CHECK_THROWS_AS(r.predict(g), ProtocolViolation);
  }
  {
    RemotePredictor r(mock("--q 5 --mode wrong-id"), 5, short_wait);
    CHECK_THROWS_AS(r.predict(g), ProtocolViolation);
  }
  {
    RemotePredictor r(mock("--q 5 --mode bad-probs"), 5, short_wait);
    CHECK_THROWS_AS(r.predict(g), ProtocolViolation);
  }
  {
    RemotePredictor r(mock("--q 5 --mode exit"), 5, short_wait);
    CHECK_THROWS_AS(r.predict(g), PredictorFailure);
  }
}

TEST_CASE("predictor factory") {
  CHECK(make_predictor("exact", 5)->name() == "exact");
  CHECK(make_predictor("heuristic", 5)->name() == "heuristic");
  CHECK(make_predictor("cmd:" + mock("--q 5"), 5)->name().starts_with("remote:"));
  CHECK_THROWS_AS(make_predictor("oracle", 5), ParseError);
}
