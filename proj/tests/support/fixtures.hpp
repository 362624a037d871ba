#pragma once

// Shared nets, networks and random generators for the unit and acceptance
// suites, plus small reference implementations used as oracles.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "petrimbn/bitmatrix.hpp"
#include "petrimbn/chain.hpp"
#include "petrimbn/eliminate.hpp"
#include "petrimbn/mbn.hpp"
#include "petrimbn/petri.hpp"
#include "petrimbn/reason.hpp"
#include "petrimbn/term.hpp"

namespace fixtures {

using Rand = std::mt19937_64;

int uniform_int(Rand& rng, int lo, int hi);
double uniform_real(Rand& rng, double lo, double hi);

// --- Petri nets ---

/// Four people K1..K4 passing on a rumour.
pmbn::Net gossip_net();
/// d1 = d3 = 1/6, d2 = 1/3 under stochastic semantics.
pmbn::StepSpec gossip_step(const pmbn::Net& net);
/// Uniform prior, one gossip step observed as a success.
pmbn::ObservationTrace gossip_trace();

/// One place I and transitions flp (no arcs) and inf (I -> I).
pmbn::Net test_net();
/// Independent weights flp = P(R|~I), inf = P(R|I) - P(R|~I), fail = 1 - P(R|I).
pmbn::StepSpec test_step(const pmbn::Net& net, double p_r_i, double p_r_not_i);
pmbn::ObservationTrace test_trace(double p_i, double p_r_i, double p_r_not_i, pmbn::Observation obs);

// --- matrices ---

/// Entries uniform in [0,1), each column scaled to a mass in [0.5, 1] (exactly 1 when stochastic).
pmbn::Matrix random_matrix(Rand& rng, unsigned in, unsigned out, bool stochastic = false);
/// Row-major dense product a (r x k) * b (k x c).
std::vector<double> naive_product(const std::vector<double>& a, const std::vector<double>& b, std::size_t r,
                                  std::size_t k, std::size_t c);
/// Row-major Kronecker product.
std::vector<double> naive_kron(const std::vector<double>& a, std::size_t ar, std::size_t ac,
                               const std::vector<double>& b, std::size_t br, std::size_t bc);
double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

// --- networks ---

/// Three fair coins a, b, c; d = a OR b; e = c AND d. Output e only, or every wire when `all_outputs`.
pmbn::Mbn or_and_network(bool all_outputs = false);
/// One 0->1 source node feeding n unary nodes whose outputs are all external.
pmbn::Mbn star_network(unsigned n, Rand& rng);
/// Two k->k nodes in sequence.
pmbn::Mbn block_chain(unsigned k, Rand& rng);
/// A chain of `length` 1->1 nodes after one source node; only the last wire is external.
pmbn::Mbn unary_chain(unsigned length, Rand& rng);

struct RandomMbnShape {
  std::size_t max_wires = 12;
  unsigned max_inputs = 2;
  unsigned max_in = 3;
  unsigned max_out = 2;
  /// Probability that a square node becomes diagonal.
  double diagonal_rate = 0.0;
};

pmbn::Mbn random_mbn(Rand& rng, const RandomMbnShape& shape = {});

/// Random well-typed term of type 0 -> m over fresh generators, and its network.
struct RandomTerm {
  pmbn::Term term;
  pmbn::Mbn mbn;
};
RandomTerm random_term(Rand& rng, std::size_t max_internal);

/// The network's matrix computed by brute force over every wire assignment, independently of the library's evaluator.
std::vector<double> brute_force(const pmbn::Mbn& b);

/// A uniformly random permutation of `order`.
pmbn::ElimOrder shuffled(pmbn::ElimOrder order, Rand& rng);

}  // namespace fixtures
