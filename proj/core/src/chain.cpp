#include "petrimbn/chain.hpp"

#include <cmath>

#include "petrimbn/error.hpp"

namespace pmbn {

namespace {

void guard(std::size_t places, std::size_t limit) {
  if (places > limit)
    throw TooLarge("dense engine limited to " + std::to_string(limit) + " places, net has " + std::to_string(places));
}

struct StepMasks {
  std::vector<Bits> pre;
  std::vector<Bits> post;
  std::vector<double> weight;
  double fail_weight;
  Semantics semantics;

  StepMasks(const Net& net, const StepSpec& step) : fail_weight(step.fail_weight()), semantics(step.semantics()) {
    const std::size_t k = net.place_count();
    auto mask = [k](const std::vector<std::size_t>& places) {
      Bits m = 0;
      for (std::size_t p : places) m |= Bits{1} << (k - 1 - p);
      return m;
    };
    for (std::size_t t : step.support()) {
      pre.push_back(mask(net.transition(t).pre));
      post.push_back(mask(net.transition(t).post));
      weight.push_back(step.weight(t));
    }
  }

  bool enabled(Bits m, std::size_t i) const { return (m & pre[i]) == pre[i]; }
  Bits fire(Bits m, std::size_t i) const { return (m & ~pre[i]) | post[i]; }

  /// Calls fn(successor, probability) for each firing transition, returns the failure probability.
  template <class F>
  double visit(Bits m, F&& fn) const {
    if (semantics == Semantics::Independent) {
      double fail = fail_weight;
      for (std::size_t i = 0; i < pre.size(); ++i) {
        if (enabled(m, i))
          fn(fire(m, i), weight[i]);
        else
          fail += weight[i];
      }
      return fail;
    }
    double enabled_mass = 0.0;
    for (std::size_t i = 0; i < pre.size(); ++i)
      if (enabled(m, i)) enabled_mass += weight[i];
    if (enabled_mass == 0.0) return 1.0;
    for (std::size_t i = 0; i < pre.size(); ++i)
      if (enabled(m, i)) fn(fire(m, i), weight[i] / enabled_mass);
    return 0.0;
  }
};

}  // namespace

JointDist::JointDist(std::size_t places, std::vector<double> values) : places_(places), values_(std::move(values)) {
  if (places > 40 || values_.size() != state_count(static_cast<unsigned>(places)))
    throw InvalidArity("joint distribution needs 2^" + std::to_string(places) + " entries");
  double total = 0.0;
  for (double v : values_) {
    if (!(v >= 0.0)) throw InvalidMatrix("negative probability in joint distribution");
    total += v;
  }
  if (total > 1.0 + kStochasticTolerance) throw InvalidMatrix("joint distribution has mass above 1");
}

JointDist JointDist::uniform(std::size_t places, std::size_t limit) {
  guard(places, limit);
  const Bits n = state_count(static_cast<unsigned>(places));
  return JointDist(places, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

JointDist JointDist::from_marginals(const std::vector<double>& marginals, std::size_t limit) {
  guard(marginals.size(), limit);
  const std::size_t k = marginals.size();
  std::vector<double> values{1.0};
  for (std::size_t p = 0; p < k; ++p) {
    const double q = marginals[p];
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidMatrix("marginal outside [0,1]");
    std::vector<double> next(values.size() * 2);
    for (std::size_t x = 0; x < values.size(); ++x) {
      next[2 * x] = values[x] * (1.0 - q);
      next[2 * x + 1] = values[x] * q;
    }
    values = std::move(next);
  }
  return JointDist(k, std::move(values));
}

JointDist JointDist::point(const Marking& m, std::size_t limit) {
  guard(m.size(), limit);
  std::vector<double> values(state_count(static_cast<unsigned>(m.size())), 0.0);
  values[m.to_bits()] = 1.0;
  return JointDist(m.size(), std::move(values));
}

double JointDist::mass() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

JointDist JointDist::normalized() const {
  const double total = mass();
  if (!(total > kEvidenceTolerance)) throw InconsistentEvidence("observations have probability zero under the prior");
  JointDist out = *this;
  for (double& v : out.values_) v /= total;
  return out;
}

std::vector<double> JointDist::marginal(const std::vector<std::size_t>& keep) const {
  for (std::size_t p : keep)
    if (p >= places_) throw MissingPlace("place index " + std::to_string(p) + " out of range");
  std::vector<double> out(state_count(static_cast<unsigned>(keep.size())), 0.0);
  for (Bits m = 0; m < values_.size(); ++m) {
    if (values_[m] == 0.0) continue;
    Bits x = 0;
    for (std::size_t p : keep) x = (x << 1) | ((m >> (places_ - 1 - p)) & 1U);
    out[x] += values_[m];
  }
  return out;
}

Matrix build_P(const Net& net, const StepSpec& step, std::size_t limit) {
  guard(net.place_count(), limit);
  const StepMasks masks(net, step);
  const unsigned k = static_cast<unsigned>(net.place_count());
  std::vector<Matrix::Entry> entries;
  for (Bits m = 0; m < state_count(k); ++m)
    masks.visit(m, [&](Bits next, double r) { entries.push_back({next, m, r}); });
  return Matrix::from_entries(k, k, std::move(entries));
}

Matrix build_F(const Net& net, const StepSpec& step, std::size_t limit) {
  guard(net.place_count(), limit);
  const StepMasks masks(net, step);
  const unsigned k = static_cast<unsigned>(net.place_count());
  std::vector<double> diag(state_count(k));
  for (Bits m = 0; m < state_count(k); ++m) diag[m] = std::min(1.0, masks.visit(m, [](Bits, double) {}));
  return Matrix::diagonal(k, std::move(diag));
}

JointDist update_raw(const JointDist& p, const Net& net, const StepSpec& step, Observation obs) {
  if (p.places() != net.place_count()) throw InvalidArity("distribution does not match the net");
  const StepMasks masks(net, step);
  std::vector<double> out(p.values().size(), 0.0);
  for (Bits m = 0; m < out.size(); ++m) {
    const double pm = p[m];
    if (pm == 0.0) continue;
    if (obs == Observation::Success) {
      masks.visit(m, [&](Bits next, double r) { out[next] += r * pm; });
    } else {
      out[m] = pm * masks.visit(m, [](Bits, double) {});
    }
  }
  return JointDist(p.places(), std::move(out));
}

JointDist update(const JointDist& p, const Net& net, const StepSpec& step, Observation obs) {
  return update_raw(p, net, step, obs).normalized();
}

}  // namespace pmbn
