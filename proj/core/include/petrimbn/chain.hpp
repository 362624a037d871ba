#pragma once

// Dense Markov-chain reference engine: joint distributions over all markings
// and the success/failure updates applied to them directly.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "petrimbn/bitmatrix.hpp"
#include "petrimbn/petri.hpp"

namespace pmbn {

inline constexpr std::size_t kDefaultDensePlaceLimit = 25;

/// Sub-probability vector over the 2^k markings of a net; the fail state is
/// implicit as 1 - mass.
class JointDist {
 public:
  JointDist() = default;
  JointDist(std::size_t places, std::vector<double> values);

  static JointDist uniform(std::size_t places, std::size_t limit = kDefaultDensePlaceLimit);
  /// Product distribution with P(place i marked) = marginals[i].
  static JointDist from_marginals(const std::vector<double>& marginals, std::size_t limit = kDefaultDensePlaceLimit);
  static JointDist point(const Marking& m, std::size_t limit = kDefaultDensePlaceLimit);

  std::size_t places() const { return places_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](Bits m) const { return values_[m]; }
  double mass() const;
  JointDist normalized() const;
  /// Unnormalized marginal over `keep`, first listed place as the MSB.
  std::vector<double> marginal(const std::vector<std::size_t>& keep) const;

 private:
  std::size_t places_ = 0;
  std::vector<double> values_{1.0};
};

/// P_*(m'|m): probability of moving from m to m' by a real transition.
Matrix build_P(const Net& net, const StepSpec& step, std::size_t limit = kDefaultDensePlaceLimit);
/// Diagonal F_*(m|m): probability that the step fails in m.
Matrix build_F(const Net& net, const StepSpec& step, std::size_t limit = kDefaultDensePlaceLimit);

/// Applies P_* or F_* without normalizing.
JointDist update_raw(const JointDist& p, const Net& net, const StepSpec& step, Observation obs);
/// update_raw followed by normalization; throws InconsistentEvidence.
JointDist update(const JointDist& p, const Net& net, const StepSpec& step, Observation obs);

}  // namespace pmbn
