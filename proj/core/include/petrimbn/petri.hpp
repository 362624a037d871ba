#pragma once

// Condition/event nets without the contact condition, and the per-step
// transition distributions under independent and stochastic semantics.

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "petrimbn/bitmatrix.hpp"

namespace pmbn {

/// Reserved name of the failure pseudo-transition.
inline constexpr std::string_view kFailName = "fail";
/// Index used for the failure pseudo-transition.
inline constexpr std::size_t kFail = std::numeric_limits<std::size_t>::max();

struct Transition {
  std::string name;
  std::vector<std::size_t> pre;   // sorted place indices
  std::vector<std::size_t> post;  // sorted place indices
};

class Net {
 public:
  struct TransitionSpec {
    std::string name;
    std::vector<std::string> pre;
    std::vector<std::string> post;
  };

  Net() = default;
  /// Throws InvalidNet on duplicate names, unknown places or the reserved name.
  Net(std::vector<std::string> places, const std::vector<TransitionSpec>& transitions);

  std::size_t place_count() const { return places_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }
  const std::vector<std::string>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const Transition& transition(std::size_t t) const { return transitions_.at(t); }

  std::optional<std::size_t> find_place(std::string_view name) const;
  std::optional<std::size_t> find_transition(std::string_view name) const;
  /// Throws MissingPlace.
  std::size_t place_index(std::string_view name) const;

 private:
  std::vector<std::string> places_;
  std::vector<Transition> transitions_;
};

/// A set of marked places, one bit per place in net order.
class Marking {
 public:
  Marking() = default;
  explicit Marking(std::size_t places) : bits_(places, false) {}
  explicit Marking(std::vector<bool> bits) : bits_(std::move(bits)) {}
  /// "1100" style literal; throws ParseError.
  static Marking parse(std::string_view literal);
  /// Packed form with place 0 as the most significant of `places` bits.
  static Marking from_bits(Bits value, std::size_t places);

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t place) const { return bits_[place]; }
  void set(std::size_t place, bool marked) { bits_.at(place) = marked; }
  Bits to_bits() const;
  std::string str() const;

  friend bool operator==(const Marking&, const Marking&) = default;

 private:
  std::vector<bool> bits_;
};

bool enabled(const Net& net, const Marking& m, std::size_t t);
/// (m \ pre) u post; throws NotEnabled.
Marking fire(const Net& net, const Marking& m, std::size_t t);

enum class Semantics { Independent, Stochastic };

std::string_view to_string(Semantics s);
Semantics parse_semantics(std::string_view text);

/// What an observer sees after a step: whether the sampled transition fired.
enum class Observation { Success, Failure };

std::string_view to_string(Observation o);
Observation parse_observation(std::string_view text);

/// The transition distribution of one step.
class StepSpec {
 public:
  StepSpec() = default;
  /// Weights are keyed by transition name, "fail" included. Missing names
  /// weigh zero. Stochastic weights are rescaled to sum to one; independent
  /// weights must already do so. Throws InvalidStep.
  StepSpec(const Net& net, Semantics semantics, const std::map<std::string, double>& weights);

  Semantics semantics() const { return semantics_; }
  double weight(std::size_t t) const { return t == kFail ? fail_weight_ : weights_.at(t); }
  double fail_weight() const { return fail_weight_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Transitions of positive weight, ascending.
  const std::vector<std::size_t>& support() const { return support_; }

 private:
  Semantics semantics_ = Semantics::Independent;
  std::vector<double> weights_;
  double fail_weight_ = 0.0;
  std::vector<std::size_t> support_;
};

/// r_n(m, t); t may be kFail.
double rate(const Net& net, const StepSpec& step, const Marking& m, std::size_t t);

struct RelevantSets {
  std::vector<std::size_t> sbar;  // places in net order
  std::vector<std::size_t> tbar;  // support transitions, ascending; fail is implicit
  bool fail_in_support = false;
  Semantics semantics = Semantics::Independent;
  std::vector<double> weight;  // parallel to tbar
  double fail_weight = 0.0;
  std::vector<Bits> pre_mask;   // over sbar, first sbar place is the MSB
  std::vector<Bits> post_mask;

  unsigned arity() const { return static_cast<unsigned>(sbar.size()); }
  /// r-bar(m1, tbar[i]) for a marking of the relevant places.
  double rbar(Bits m1, std::size_t i) const;
  double rbar_fail(Bits m1) const;
  bool enabled_local(Bits m1, std::size_t i) const { return (m1 & pre_mask[i]) == pre_mask[i]; }
  Bits fire_local(Bits m1, std::size_t i) const { return (m1 & ~pre_mask[i]) | post_mask[i]; }
};

/// Throws DegenerateStep when the support holds no real transition.
RelevantSets relevant_sets(const Net& net, const StepSpec& step);

}  // namespace pmbn
