#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "petrimbn/error.hpp"
#include "petrimbn/petri.hpp"

using namespace pmbn;

namespace {

// Two persons, each susceptible, infected or removed.
Net sir_net() {
  return Net({"S1", "I1", "R1", "S2", "I2", "R2"}, {{"i1", {"S1", "I2"}, {"I1", "I2"}},
                                                    {"i2", {"S2", "I1"}, {"I2", "I1"}},
                                                    {"r1", {"I1"}, {"R1"}},
                                                    {"r2", {"I2"}, {"R2"}}});
}

}  // namespace

TEST_SUITE("petri") {
  TEST_CASE("firing in the gossip net") {
    const Net net = fixtures::gossip_net();
    const auto d3 = *net.find_transition("d3");
    const auto d4 = *net.find_transition("d4");
    CHECK(fire(net, Marking::parse("1100"), d3) == Marking::parse("1110"));
    CHECK(enabled(net, Marking::parse("1100"), 0));
    CHECK_FALSE(enabled(net, Marking::parse("1100"), d4));
    CHECK_THROWS_AS(fire(net, Marking::parse("1100"), d4), NotEnabled);
  }

  TEST_CASE("a transition without arcs leaves the marking alone") {
    const Net net({"a", "b"}, {{"noop", {}, {}}});
    for (Bits m = 0; m < 4; ++m) CHECK(fire(net, Marking::from_bits(m, 2), 0) == Marking::from_bits(m, 2));
  }

  TEST_CASE("markings pack the first place as the most significant bit") {
    const Marking m = Marking::parse("1101");
    CHECK(m.to_bits() == 0b1101);
    CHECK(m.str() == "1101");
    CHECK(Marking::from_bits(0b0110, 4) == Marking::parse("0110"));
    CHECK_THROWS_AS(Marking::parse("10x"), ParseError);
  }

  TEST_CASE("net construction rejects bad names") {
    CHECK_THROWS_AS(Net({"a", "a"}, {}), InvalidNet);
    CHECK_THROWS_AS(Net({"a"}, {{"t", {"b"}, {}}}), InvalidNet);
    CHECK_THROWS_AS(Net({"a"}, {{"fail", {"a"}, {}}}), InvalidNet);
    CHECK_THROWS_AS(Net({"a"}, {{"t", {"a"}, {}}, {"t", {}, {"a"}}}), InvalidNet);
  }

  TEST_CASE("stochastic rates renormalize over enabled transitions") {
    const Net net = fixtures::gossip_net();
    const StepSpec step = fixtures::gossip_step(net);
    const Marking m = Marking::parse("1100");
    CHECK(rate(net, step, m, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rate(net, step, m, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(rate(net, step, m, 2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(rate(net, step, m, kFail) == 0.0);
    CHECK(rate(net, step, Marking::parse("0001"), kFail) == 1.0);
    CHECK(rate(net, step, Marking::parse("0001"), 0) == 0.0);
  }

  TEST_CASE("independent rates are the weights") {
    const Net net = fixtures::gossip_net();
    const StepSpec step(net, Semantics::Independent, {{"d1", 0.5}, {"d4", 0.25}, {"fail", 0.25}});
    for (Bits m = 0; m < 16; ++m) {
      const Marking mk = Marking::from_bits(m, 4);
      CHECK(rate(net, step, mk, 0) == 0.5);
      CHECK(rate(net, step, mk, 3) == 0.25);
      CHECK(rate(net, step, mk, 1) == 0.0);
      CHECK(rate(net, step, mk, kFail) == 0.25);
    }
  }

  TEST_CASE("step weights are validated") {
    const Net net = fixtures::gossip_net();
    CHECK_THROWS_AS(StepSpec(net, Semantics::Independent, {{"d1", 0.5}}), InvalidStep);
    CHECK_THROWS_AS(StepSpec(net, Semantics::Stochastic, {{"d1", 0.5}, {"fail", 0.5}}), InvalidStep);
    CHECK_THROWS_AS(StepSpec(net, Semantics::Stochastic, {{"zz", 1.0}}), InvalidStep);
    CHECK_THROWS_AS(StepSpec(net, Semantics::Independent, {{"fail", 1.0}}), DegenerateStep);
    const StepSpec s(net, Semantics::Stochastic, {{"d1", 0.2}, {"d2", 0.6}});
    CHECK(s.weight(0) == doctest::Approx(0.25));
    CHECK(s.support() == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("relevant places of the gossip step exclude K4") {
    const Net net = fixtures::gossip_net();
    const RelevantSets rs = relevant_sets(net, fixtures::gossip_step(net));
    CHECK(rs.sbar == std::vector<std::size_t>{0, 1, 2});
    CHECK(rs.arity() == 3);
    CHECK(rs.tbar == std::vector<std::size_t>{0, 1, 2});
    CHECK(rs.pre_mask[2] == 0b100);
    CHECK(rs.post_mask[2] == 0b101);
    CHECK(rs.rbar(0b110, 1) == doctest::Approx(0.5));
    CHECK(rs.fire_local(0b110, 2) == 0b111);
    CHECK(rs.rbar_fail(0b001) == 1.0);
  }

  TEST_CASE("full support touches every place with an arc") {
    const Net net({"a", "b", "c", "d"}, {{"t1", {"a"}, {"b"}}, {"t2", {"b"}, {"c"}}});
    const RelevantSets rs = relevant_sets(net, StepSpec(net, Semantics::Stochastic, {{"t1", 1}, {"t2", 1}}));
    CHECK(rs.sbar == std::vector<std::size_t>{0, 1, 2});
  }

  TEST_CASE("relevant places of an infection step match brute-force dependence") {
    const Net net = sir_net();
    const auto i1 = *net.find_transition("i1");
    const StepSpec step(net, Semantics::Stochastic, {{"i1", 1.0}});
    const RelevantSets rs = relevant_sets(net, step);

    // a place matters when toggling it changes the rate or it is changed by firing
    std::set<std::size_t> depends;
    const std::size_t k = net.place_count();
    for (Bits m = 0; m < state_count(static_cast<unsigned>(k)); ++m) {
      const Marking mk = Marking::from_bits(m, k);
      for (std::size_t p = 0; p < k; ++p) {
        Marking flipped = mk;
        flipped.set(p, !mk[p]);
        if (rate(net, step, mk, i1) != rate(net, step, flipped, i1)) depends.insert(p);
        if (enabled(net, mk, i1) && fire(net, mk, i1)[p] != mk[p]) depends.insert(p);
      }
    }
    CHECK(std::set<std::size_t>(rs.sbar.begin(), rs.sbar.end()) == depends);
    CHECK(rs.sbar == std::vector<std::size_t>{0, 1, 4});
  }

  TEST_CASE("all-zero stochastic weights are rejected") {
    const Net net({"a"}, {{"t", {"a"}, {}}});
    CHECK_THROWS_AS(StepSpec(net, Semantics::Stochastic, {{"t", 0.0}}), InvalidStep);
  }

  TEST_CASE("semantics and observation names") {
    CHECK(parse_semantics("stochastic") == Semantics::Stochastic);
    CHECK(to_string(Semantics::Independent) == "independent");
    CHECK(parse_observation("failure") == Observation::Failure);
    CHECK_THROWS(parse_observation("maybe"));
  }
}
