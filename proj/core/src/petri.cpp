#include "petrimbn/petri.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "petrimbn/error.hpp"

namespace pmbn {

namespace {

std::vector<std::size_t> resolve(const std::vector<std::string>& names, const std::map<std::string, std::size_t>& index,
                                 const std::string& transition) {
  std::vector<std::size_t> out;
  for (const std::string& n : names) {
    auto it = index.find(n);
    if (it == index.end()) throw InvalidNet("transition '" + transition + "' refers to unknown place '" + n + "'");
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw InvalidNet("transition '" + transition + "' lists a place twice");
  return out;
}

}  // namespace

Net::Net(std::vector<std::string> places, const std::vector<TransitionSpec>& transitions) : places_(std::move(places)) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < places_.size(); ++i) {
    if (places_[i].empty()) throw InvalidNet("empty place name");
    if (!index.emplace(places_[i], i).second) throw InvalidNet("duplicate place '" + places_[i] + "'");
  }
  std::set<std::string> names;
  for (const TransitionSpec& spec : transitions) {
    if (spec.name == kFailName) throw InvalidNet("'fail' is reserved and cannot name a transition");
    if (spec.name.empty()) throw InvalidNet("empty transition name");
    if (!names.insert(spec.name).second) throw InvalidNet("duplicate transition '" + spec.name + "'");
    transitions_.push_back({spec.name, resolve(spec.pre, index, spec.name), resolve(spec.post, index, spec.name)});
  }
}

std::optional<std::size_t> Net::find_place(std::string_view name) const {
  auto it = std::find(places_.begin(), places_.end(), name);
  if (it == places_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - places_.begin());
}

std::optional<std::size_t> Net::find_transition(std::string_view name) const {
  for (std::size_t t = 0; t < transitions_.size(); ++t)
    if (transitions_[t].name == name) return t;
  return std::nullopt;
}

std::size_t Net::place_index(std::string_view name) const {
  if (auto p = find_place(name)) return *p;
  throw MissingPlace("unknown place '" + std::string(name) + "'");
}

Marking Marking::parse(std::string_view literal) {
  std::vector<bool> bits;
  for (char c : literal) {
    if (c != '0' && c != '1') throw ParseError("marking literal contains '" + std::string(1, c) + "'");
    bits.push_back(c == '1');
  }
  return Marking(std::move(bits));
}

Marking Marking::from_bits(Bits value, std::size_t places) {
  Marking m(places);
  for (std::size_t i = 0; i < places; ++i) m.bits_[i] = ((value >> (places - 1 - i)) & 1U) != 0;
  return m;
}

Bits Marking::to_bits() const {
  if (bits_.size() > 64) throw TooLarge("marking wider than 64 places");
  Bits v = 0;
  for (bool b : bits_) v = (v << 1) | static_cast<Bits>(b);
  return v;
}

std::string Marking::str() const {
  std::string s;
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

bool enabled(const Net& net, const Marking& m, std::size_t t) {
  for (std::size_t p : net.transition(t).pre)
    if (!m[p]) return false;
  return true;
}

Marking fire(const Net& net, const Marking& m, std::size_t t) {
  if (m.size() != net.place_count()) throw InvalidArity("marking length does not match the net");
  const Transition& tr = net.transition(t);
  if (!enabled(net, m, t)) throw NotEnabled("transition '" + tr.name + "' is not enabled in " + m.str());
  Marking out = m;
  for (std::size_t p : tr.pre) out.set(p, false);
  for (std::size_t p : tr.post) out.set(p, true);
  return out;
}

std::string_view to_string(Semantics s) { return s == Semantics::Independent ? "independent" : "stochastic"; }

Semantics parse_semantics(std::string_view text) {
  if (text == "independent") return Semantics::Independent;
  if (text == "stochastic") return Semantics::Stochastic;
  throw ParseError("unknown semantics '" + std::string(text) + "'");
}

std::string_view to_string(Observation o) { return o == Observation::Success ? "success" : "failure"; }

Observation parse_observation(std::string_view text) {
  if (text == "success") return Observation::Success;
  if (text == "failure") return Observation::Failure;
  throw ParseError("unknown observation '" + std::string(text) + "'");
}

StepSpec::StepSpec(const Net& net, Semantics semantics, const std::map<std::string, double>& weights)
    : semantics_(semantics), weights_(net.transition_count(), 0.0) {
  double total = 0.0;
  for (const auto& [name, w] : weights) {
    if (!(w >= 0.0) || w > 1.0 + kStochasticTolerance)
      throw InvalidStep("weight of '" + name + "' is outside [0,1]");
    if (name == kFailName) {
      fail_weight_ = w;
    } else if (auto t = net.find_transition(name)) {
      weights_[*t] = w;
    } else {
      throw InvalidStep("unknown transition '" + name + "'");
    }
    total += w;
  }
  if (semantics_ == Semantics::Stochastic) {
    if (fail_weight_ != 0.0) throw InvalidStep("stochastic steps cannot weight 'fail'");
    if (!(total > 0.0)) throw InvalidStep("all weights are zero");
    for (double& w : weights_) w /= total;
  } else if (std::abs(total - 1.0) > kStochasticTolerance) {
    throw InvalidStep("independent step weights sum to " + std::to_string(total) + ", expected 1");
  }
  for (std::size_t t = 0; t < weights_.size(); ++t)
    if (weights_[t] > 0.0) support_.push_back(t);
  if (support_.empty()) throw DegenerateStep("no transition has positive weight");
}

double rate(const Net& net, const StepSpec& step, const Marking& m, std::size_t t) {
  if (step.semantics() == Semantics::Independent) return step.weight(t);
  double enabled_mass = 0.0;
  for (std::size_t u : step.support())
    if (enabled(net, m, u)) enabled_mass += step.weight(u);
  if (enabled_mass == 0.0) return t == kFail ? 1.0 : 0.0;
  if (t == kFail || !enabled(net, m, t)) return 0.0;
  return step.weight(t) / enabled_mass;
}

double RelevantSets::rbar(Bits m1, std::size_t i) const {
  if (semantics == Semantics::Independent) return weight[i];
  if (!enabled_local(m1, i)) return 0.0;
  double enabled_mass = 0.0;
  for (std::size_t j = 0; j < tbar.size(); ++j)
    if (enabled_local(m1, j)) enabled_mass += weight[j];
  return weight[i] / enabled_mass;
}

double RelevantSets::rbar_fail(Bits m1) const {
  if (semantics == Semantics::Independent) return fail_weight;
  for (std::size_t j = 0; j < tbar.size(); ++j)
    if (enabled_local(m1, j)) return 0.0;
  return 1.0;
}

RelevantSets relevant_sets(const Net& net, const StepSpec& step) {
  RelevantSets rs;
  rs.semantics = step.semantics();
  rs.tbar = step.support();
  if (rs.tbar.empty()) throw DegenerateStep("the step support contains no transition");
  rs.fail_weight = step.fail_weight();
  rs.fail_in_support = step.fail_weight() > 0.0;
  std::vector<bool> touched(net.place_count(), false);
  for (std::size_t t : rs.tbar) {
    rs.weight.push_back(step.weight(t));
    for (std::size_t p : net.transition(t).pre) touched[p] = true;
    for (std::size_t p : net.transition(t).post) touched[p] = true;
  }
  std::vector<std::size_t> local(net.place_count(), 0);
  for (std::size_t p = 0; p < net.place_count(); ++p)
    if (touched[p]) {
      local[p] = rs.sbar.size();
      rs.sbar.push_back(p);
    }
  if (rs.sbar.size() > kMaxArity) throw TooLarge("a step touches more than " + std::to_string(kMaxArity) + " places");
  const unsigned l = rs.arity();
  auto mask = [&](const std::vector<std::size_t>& places) {
    Bits m = 0;
    for (std::size_t p : places) m |= Bits{1} << (l - 1 - local[p]);
    return m;
  };
  for (std::size_t t : rs.tbar) {
    rs.pre_mask.push_back(mask(net.transition(t).pre));
    rs.post_mask.push_back(mask(net.transition(t).post));
  }
  return rs;
}

}  // namespace pmbn
