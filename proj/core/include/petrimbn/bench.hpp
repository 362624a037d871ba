#pragma once

// Seeded random nets and consistent observation traces, and the runtime
// comparison between the network engine and the dense engine.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "petrimbn/petri.hpp"
#include "petrimbn/reason.hpp"

namespace pmbn {

/// mt19937_64 with hand-rolled bounded draws, so streams agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  /// Uniform in [0, 1).
  double unit();
  /// A uniformly chosen k-subset of {0..n-1}, ascending.
  std::vector<std::size_t> subset(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 eng_;
};

struct NetShape {
  std::size_t places = 10;
  std::size_t transitions = 10;
  std::size_t max_pre = 3;
  std::size_t max_post = 3;
};

struct TraceShape {
  std::size_t steps = 10;
  std::size_t max_active = 5;
  Semantics semantics = Semantics::Independent;
};

/// |pre| uniform in 1..max_pre, |post| uniform in 0..max_post, both uniform subsets.
Net random_net(Rng& rng, const NetShape& shape);
/// Uniform independent prior; each step activates 1..max_active transitions with
/// normalized uniform weights, and the observation comes from simulating a
/// hidden marking drawn from the prior.
ObservationTrace random_trace(Rng& rng, const Net& net, const TraceShape& shape);

enum class Engine { Mbn, Dense };

std::string_view to_string(Engine e);

struct BenchConfig {
  std::pair<std::size_t, std::size_t> places{10, 25};
  /// Defaults to the place count when unset.
  std::pair<std::size_t, std::size_t> transitions{0, 0};
  std::size_t max_pre = 3;
  std::size_t max_post = 3;
  std::size_t max_active = 5;
  std::size_t steps = 10;
  std::size_t trials = 5;
  std::uint64_t seed = 7;
  std::vector<Engine> engines{Engine::Mbn, Engine::Dense};
  Semantics semantics = Semantics::Independent;
  std::size_t dense_limit = kDefaultDensePlaceLimit;
};

struct BenchRow {
  std::size_t places = 0;
  std::size_t transitions = 0;
  std::size_t trial = 0;
  Engine engine = Engine::Mbn;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  double runtime_ms = 0.0;
  std::size_t max_factor_wires = 0;
  double marginal = 0.0;  // P(first place marked)
};

/// Seed of one trial, derived from the run seed.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t places, std::size_t trial);

/// Rows sorted by (places, trial, engine). Dense runs above the limit are skipped.
std::vector<BenchRow> run_bench(const BenchConfig& config);
/// One trial: builds the instance and times the requested engine.
BenchRow run_trial(const BenchConfig& config, std::size_t places, std::size_t trial, Engine engine);

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace pmbn
