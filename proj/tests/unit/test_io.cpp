#include <doctest.h>

#include "fixtures.hpp"
#include "petrimbn/error.hpp"
#include "petrimbn/io.hpp"

using namespace pmbn;

TEST_SUITE("io") {
  TEST_CASE("net files") {
    const Net net = parse_net(R"({"places": ["a", "b"], "transitions": [{"name": "t", "pre": ["a"], "post": ["b"]}]})");
    CHECK(net.place_count() == 2);
    CHECK(net.transition(0).pre == std::vector<std::size_t>{0});
    CHECK(net.transition(0).post == std::vector<std::size_t>{1});

    const Net gossip = fixtures::gossip_net();
    const Net again = parse_net(net_to_json(gossip));
    CHECK(again.places() == gossip.places());
    for (std::size_t t = 0; t < gossip.transition_count(); ++t) {
      CHECK(again.transition(t).name == gossip.transition(t).name);
      CHECK(again.transition(t).pre == gossip.transition(t).pre);
      CHECK(again.transition(t).post == gossip.transition(t).post);
    }
  }

  TEST_CASE("parse errors name the field") {
    CHECK_THROWS_WITH_AS(parse_net(R"({"transitions": []})"), doctest::Contains("places"), ParseError);
    CHECK_THROWS_AS(parse_net("{not json"), ParseError);
    CHECK_THROWS_AS(parse_net(R"({"places": ["a"], "transitions": [{"name": "t", "pre": ["z"], "post": []}]})"),
                    InvalidNet);
    CHECK_THROWS_WITH_AS(parse_trace(R"({"net": {"places": ["a"], "transitions": []}, "steps": [{"weights": {}}]})"),
                         doctest::Contains("steps[0]"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_trace(R"({"net": {"places": ["a"], "transitions": []}, "prior": {"b": 0.5}, "steps": []})"),
        doctest::Contains("unknown place"), ParseError);
  }

  TEST_CASE("trace files") {
    const ObservationTrace trace = load_trace(std::filesystem::path(PETRIMBN_TEST_DATA) / "gossip_trace.json");
    CHECK(trace.net.place_count() == 4);
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.steps[0].obs == Observation::Success);
    CHECK(trace.steps[0].step.semantics() == Semantics::Stochastic);
    CHECK(trace.steps[0].step.weight(1) == doctest::Approx(0.5));
    CHECK(trace.prior.marginals == std::vector<double>(4, 0.5));

    const ObservationTrace again = parse_trace(trace_to_json(trace));
    CHECK(again.steps.size() == 1);
    CHECK(again.steps[0].step.weights() == trace.steps[0].step.weights());
    CHECK(again.prior.marginals == trace.prior.marginals);
  }

  TEST_CASE("a missing prior is uniform and joint priors are read") {
    const ObservationTrace u = parse_trace(R"({"net": {"places": ["a", "b"], "transitions": []}, "steps": []})");
    CHECK(u.prior.marginals == std::vector<double>{0.5, 0.5});
    const ObservationTrace j = parse_trace(
        R"({"net": {"places": ["a", "b"], "transitions": []}, "prior": {"joint": [0.1, 0.2, 0.3, 0.4]}, "steps": []})");
    REQUIRE(j.prior.joint);
    CHECK(j.prior.joint->at(3) == 0.4);
    CHECK_THROWS_AS(
        parse_trace(R"({"net": {"places": ["a", "b"], "transitions": []}, "prior": {"joint": [1.0]}, "steps": []})"),
        ParseError);
  }

  TEST_CASE("order files use graph dump names") {
    const CausalityGraph g = fixtures::or_and_network().graph();
    CHECK(parse_order("1:1 2:1\n3:1  4:1", g) == ElimOrder{0, 1, 2, 3});
    CHECK_THROWS_AS(parse_order("9:1", g), ParseError);
    CHECK_THROWS_AS(parse_order("i1", g), ParseError);
    CHECK_THROWS_AS(parse_order("x", g), ParseError);
  }
}
