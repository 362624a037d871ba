#pragma once

// Observer pipeline: prior, observed steps, posterior network, queries.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "petrimbn/bitmatrix.hpp"
#include "petrimbn/chain.hpp"
#include "petrimbn/eliminate.hpp"
#include "petrimbn/mbn.hpp"
#include "petrimbn/petri.hpp"

namespace pmbn {

struct TraceStep {
  StepSpec step;
  Observation obs = Observation::Success;
};

/// Either per-place marking probabilities or an explicit joint vector.
struct Prior {
  std::vector<double> marginals;
  std::optional<std::vector<double>> joint;

  static Prior uniform(std::size_t places) { return {std::vector<double>(places, 0.5), std::nullopt}; }
};

struct ObservationTrace {
  Net net;
  Prior prior;
  std::vector<TraceStep> steps;
};

struct Posterior {
  Mbn mbn;
  std::size_t steps_applied = 0;
  bool normalized = false;
};

Mbn prior_network(const Net& net, const Prior& prior);

/// Attaches one update node per step; nothing is normalized.
Posterior run(const ObservationTrace& trace);

struct QueryOptions {
  EliminationOptions elimination;
  /// Elimination order over the wires of the terminated network; min degree when empty.
  std::optional<ElimOrder> order;
  EliminationStats* stats = nullptr;
};

/// Normalized joint marginal of `places` (first place as the MSB). Throws InconsistentEvidence.
ProbVector marginal(const Posterior& p, const std::vector<std::string>& places, const QueryOptions& q = {});
/// Probability of all observations under the prior.
double mass(const Posterior& p, const QueryOptions& q = {});

/// The dense reference: prior followed by the unnormalized updates.
JointDist replay(const ObservationTrace& trace, std::size_t limit = kDefaultDensePlaceLimit);
/// Normalized marginal from the dense reference.
std::vector<double> replay_marginal(const ObservationTrace& trace, const std::vector<std::string>& places,
                                    std::size_t limit = kDefaultDensePlaceLimit);

}  // namespace pmbn
