#include <doctest.h>

#include "fixtures.hpp"
#include "petrimbn/chain.hpp"
#include "petrimbn/error.hpp"

using namespace pmbn;
using fixtures::Rand;

namespace {

struct DenseStep {
  std::vector<double> p;  // row-major 2^k x 2^k
  std::vector<double> f;  // diagonal
};

// Transition probabilities straight from the arcs, without the library's rate().
DenseStep reference_step(const Net& net, const StepSpec& step) {
  const std::size_t k = net.place_count();
  const Bits n = state_count(static_cast<unsigned>(k));
  DenseStep out{std::vector<double>(n * n, 0.0), std::vector<double>(n, 0.0)};
  for (Bits m = 0; m < n; ++m) {
    auto marked = [&](std::size_t place) { return ((m >> (k - 1 - place)) & 1U) != 0; };
    auto successor = [&](const Transition& t) {
      Bits r = m;
      for (std::size_t p : t.pre) r &= ~(Bits{1} << (k - 1 - p));
      for (std::size_t p : t.post) r |= Bits{1} << (k - 1 - p);
      return r;
    };
    double enabled_weight = 0.0;
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
      const Transition& tr = net.transition(t);
      bool on = true;
      for (std::size_t p : tr.pre) on = on && marked(p);
      if (on) enabled_weight += step.weights()[t];
    }
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
      const Transition& tr = net.transition(t);
      const double w = step.weights()[t];
      if (w == 0.0) continue;
      bool on = true;
      for (std::size_t p : tr.pre) on = on && marked(p);
      if (step.semantics() == Semantics::Independent) {
        if (on)
          out.p[successor(tr) * n + m] += w;
        else
          out.f[m] += w;
      } else if (on) {
        out.p[successor(tr) * n + m] += w / enabled_weight;
      }
    }
    if (step.semantics() == Semantics::Independent)
      out.f[m] += step.fail_weight();
    else if (enabled_weight == 0.0)
      out.f[m] = 1.0;
  }
  return out;
}

Net random_small_net(Rand& rng, std::size_t places, std::size_t transitions) {
  std::vector<std::string> names;
  for (std::size_t p = 0; p < places; ++p) names.push_back("p" + std::to_string(p));
  std::vector<Net::TransitionSpec> ts;
  for (std::size_t t = 0; t < transitions; ++t) {
    Net::TransitionSpec spec{"t" + std::to_string(t), {}, {}};
    for (std::size_t p = 0; p < places; ++p) {
      if (fixtures::uniform_real(rng, 0, 1) < 0.35) spec.pre.push_back(names[p]);
      if (fixtures::uniform_real(rng, 0, 1) < 0.35) spec.post.push_back(names[p]);
    }
    ts.push_back(spec);
  }
  return Net(names, ts);
}

StepSpec random_step(Rand& rng, const Net& net, Semantics sem) {
  std::map<std::string, double> w;
  double total = 0.0;
  for (const Transition& t : net.transitions())
    if (fixtures::uniform_real(rng, 0, 1) < 0.6) total += w[t.name] = fixtures::uniform_real(rng, 0.1, 1.0);
  if (w.empty()) total += w[net.transition(0).name] = 1.0;
  if (sem == Semantics::Independent) {
    const double fail = fixtures::uniform_real(rng, 0.0, 0.3);
    for (auto& [name, x] : w) x *= (1.0 - fail) / total;
    w[std::string(kFailName)] = fail;
  }
  return StepSpec(net, sem, w);
}

}  // namespace

TEST_SUITE("chain") {
  TEST_CASE("gossip step success matrix") {
    const Net net = fixtures::gossip_net();
    const Matrix p = build_P(net, fixtures::gossip_step(net));
    const Bits m = Marking::parse("1100").to_bits();
    CHECK(p.at(Marking::parse("1110").to_bits(), m) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p.at(m, m) == doctest::Approx(0.75).epsilon(1e-15));
  }

  TEST_CASE("gossip step failure matrix") {
    const Net net = fixtures::gossip_net();
    const Matrix f = build_F(net, fixtures::gossip_step(net));
    CHECK(f.is_diagonal());
    CHECK(f.at(0b0001, 0b0001) == 1.0);
    CHECK(f.at(0b1100, 0b1100) == 0.0);
  }

  TEST_CASE("an always enabled no-op transition gives the identity") {
    const Net net({"a", "b", "c"}, {{"noop", {}, {}}});
    const StepSpec step(net, Semantics::Stochastic, {{"noop", 1.0}});
    CHECK(approx_equal(build_P(net, step), identity(3), 0.0));
    CHECK(build_F(net, step).nonzeros() == 0);
  }

  TEST_CASE("test net matrices hold the result probabilities") {
    const Net net = fixtures::test_net();
    const StepSpec step = fixtures::test_step(net, 0.9, 0.1);
    const Matrix p = build_P(net, step);
    const Matrix f = build_F(net, step);
    CHECK(p.at(1, 1) == doctest::Approx(0.9));
    CHECK(p.at(0, 0) == doctest::Approx(0.1));
    CHECK(p.at(0, 1) == 0.0);
    CHECK(p.at(1, 0) == 0.0);
    CHECK(f.at(1, 1) == doctest::Approx(0.1));
    CHECK(f.at(0, 0) == doctest::Approx(0.9));
  }

  TEST_CASE("test net posterior after one observation") {
    const Net net = fixtures::test_net();
    const StepSpec step = fixtures::test_step(net, 0.9, 0.1);
    const JointDist prior = JointDist::from_marginals({0.5});
    const JointDist pos = update(prior, net, step, Observation::Success);
    CHECK(pos[1] == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(pos[0] == doctest::Approx(0.1).epsilon(1e-14));
    const JointDist neg = update(prior, net, step, Observation::Failure);
    CHECK(neg[1] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(neg[0] == doctest::Approx(0.9).epsilon(1e-14));
  }

  TEST_CASE("a no-op step leaves the distribution unchanged") {
    const Net net({"a", "b"}, {{"noop", {}, {}}});
    const StepSpec step(net, Semantics::Stochastic, {{"noop", 1.0}});
    const JointDist prior(2, {0.1, 0.2, 0.3, 0.4});
    const JointDist after = update(prior, net, step, Observation::Success);
    CHECK(fixtures::max_abs_diff(after.values(), prior.values()) < 1e-15);
  }

  TEST_CASE("step matrices agree with a direct reading of the arcs") {
    Rand rng(11);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t k = fixtures::uniform_int(rng, 1, 6);
      const Net net = random_small_net(rng, k, fixtures::uniform_int(rng, 1, 5));
      const Semantics sem = trial % 2 ? Semantics::Stochastic : Semantics::Independent;
      const StepSpec step = random_step(rng, net, sem);
      const DenseStep ref = reference_step(net, step);
      CHECK(fixtures::max_abs_diff(build_P(net, step).to_dense(), ref.p) < 1e-14);
      const Matrix f = build_F(net, step);
      for (Bits m = 0; m < state_count(static_cast<unsigned>(k)); ++m) CHECK(f.at(m, m) == doctest::Approx(ref.f[m]));

      // success and failure together are stochastic
      const Matrix p = build_P(net, step);
      for (Bits m = 0; m < p.cols(); ++m) CHECK(p.column_sum(m) + f.at(m, m) == doctest::Approx(1.0).epsilon(1e-12));

      // applying the step column-wise equals the matrix product
      JointDist prior(k, std::vector<double>(p.cols(), 1.0 / static_cast<double>(p.cols())));
      const auto expect = fixtures::naive_product(p.to_dense(), prior.values(), p.rows(), p.cols(), 1);
      CHECK(fixtures::max_abs_diff(update_raw(prior, net, step, Observation::Success).values(), expect) < 1e-15);
    }
  }

  TEST_CASE("eager and deferred normalization give the same posterior") {
    Rand rng(12);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t k = fixtures::uniform_int(rng, 2, 6);
      const Net net = random_small_net(rng, k, 4);
      JointDist eager = JointDist::uniform(k);
      JointDist deferred = eager;
      bool consistent = true;
      for (int s = 0; s < 5 && consistent; ++s) {
        const StepSpec step = random_step(rng, net, s % 2 ? Semantics::Stochastic : Semantics::Independent);
        const Observation obs = fixtures::uniform_int(rng, 0, 1) ? Observation::Success : Observation::Failure;
        deferred = update_raw(deferred, net, step, obs);
        if (deferred.mass() <= 1e-12) {
          consistent = false;
          break;
        }
        eager = update(eager, net, step, obs);
      }
      if (consistent) CHECK(fixtures::max_abs_diff(eager.values(), deferred.normalized().values()) < 1e-9);
    }
  }

  TEST_CASE("failures keep the support from growing") {
    Rand rng(13);
    const Net net = random_small_net(rng, 5, 4);
    JointDist p = JointDist::point(Marking::parse("10100"));
    p = update_raw(p, net, random_step(rng, net, Semantics::Stochastic), Observation::Success);
    for (int s = 0; s < 3; ++s) {
      const JointDist before = p;
      p = update_raw(p, net, random_step(rng, net, Semantics::Independent), Observation::Failure);
      for (Bits m = 0; m < 32; ++m)
        if (before[m] == 0.0) CHECK(p[m] == 0.0);
    }
  }

  TEST_CASE("marginals and guards") {
    const JointDist d = JointDist::from_marginals({0.25, 0.5, 1.0});
    CHECK(d.mass() == doctest::Approx(1.0));
    const auto m = d.marginal({0});
    CHECK(m[1] == doctest::Approx(0.25));
    const auto j = d.marginal({2, 0});
    CHECK(j[0b10] == doctest::Approx(0.75));
    CHECK(j[0b11] == doctest::Approx(0.25));
    CHECK(j[0b00] == 0.0);
    CHECK_THROWS_AS(JointDist::uniform(26), TooLarge);
    CHECK_THROWS_AS(JointDist::uniform(12, 10), TooLarge);
    CHECK_THROWS_AS(JointDist(2, {0.0, 0.0, 0.0, 0.0}).normalized(), InconsistentEvidence);
  }
}
