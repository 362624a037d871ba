#include "petrimbn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <map>
#include <tuple>
#include <ostream>

#include "petrimbn/error.hpp"

namespace pmbn {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InvalidArity("empty range");
  // rejection sampling keeps the draw unbiased
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = eng_();
  while (x >= limit) x = eng_();
  return x % n;
}

double Rng::unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

std::vector<std::size_t> Rng::subset(std::size_t n, std::size_t k) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + below(n - i)]);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

Net random_net(Rng& rng, const NetShape& shape) {
  if (shape.places == 0 || shape.transitions == 0 || shape.max_pre == 0)
    throw InvalidArity("random nets need places, transitions and max_pre >= 1");
  std::vector<std::string> places;
  for (std::size_t p = 0; p < shape.places; ++p) places.push_back("p" + std::to_string(p + 1));
  std::vector<Net::TransitionSpec> specs;
  for (std::size_t t = 0; t < shape.transitions; ++t) {
    Net::TransitionSpec spec{"t" + std::to_string(t + 1), {}, {}};
    const std::size_t npre = rng.between(1, std::min(shape.max_pre, shape.places));
    const std::size_t npost = rng.between(0, std::min(shape.max_post, shape.places));
    for (std::size_t p : rng.subset(shape.places, npre)) spec.pre.push_back(places[p]);
    for (std::size_t p : rng.subset(shape.places, npost)) spec.post.push_back(places[p]);
    specs.push_back(std::move(spec));
  }
  return Net(std::move(places), specs);
}

ObservationTrace random_trace(Rng& rng, const Net& net, const TraceShape& shape) {
  ObservationTrace trace{net, Prior::uniform(net.place_count()), {}};
  Marking hidden(net.place_count());
  for (std::size_t p = 0; p < net.place_count(); ++p) hidden.set(p, rng.unit() < trace.prior.marginals[p]);

  for (std::size_t s = 0; s < shape.steps; ++s) {
    const std::size_t k = rng.between(1, std::min(shape.max_active, net.transition_count()));
    const std::vector<std::size_t> active = rng.subset(net.transition_count(), k);
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      w.push_back(1.0 - rng.unit());  // in (0, 1]
      total += w.back();
    }
    std::map<std::string, double> weights;
    for (std::size_t i = 0; i < k; ++i) weights[net.transition(active[i]).name] = w[i] / total;
    StepSpec step(net, shape.semantics, weights);

    // simulate the hidden marking
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < k; ++i)
      if (shape.semantics == Semantics::Independent || enabled(net, hidden, active[i])) candidates.push_back(i);
    Observation obs = Observation::Failure;
    if (!candidates.empty()) {
      double mass = 0.0;
      for (std::size_t i : candidates) mass += w[i];
      double u = rng.unit() * mass;
      std::size_t pick = candidates.back();
      for (std::size_t i : candidates) {
        if (u < w[i]) {
          pick = i;
          break;
        }
        u -= w[i];
      }
      if (enabled(net, hidden, active[pick])) {
        hidden = fire(net, hidden, active[pick]);
        obs = Observation::Success;
      }
    }
    trace.steps.push_back({std::move(step), obs});
  }
  return trace;
}

std::string_view to_string(Engine e) { return e == Engine::Mbn ? "mbn" : "dense"; }

std::uint64_t trial_seed(std::uint64_t seed, std::size_t places, std::size_t trial) {
  // splitmix64 finalizer over the combined inputs
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (places * 1000003ULL + trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

BenchRow run_trial(const BenchConfig& config, std::size_t places, std::size_t trial, Engine engine) {
  BenchRow row;
  row.places = places;
  row.trial = trial;
  row.engine = engine;
  row.seed = trial_seed(config.seed, places, trial);
  row.steps = config.steps;

  Rng rng(row.seed);
  auto [tlo, thi] = config.transitions;
  if (tlo == 0 && thi == 0) tlo = thi = places;
  row.transitions = static_cast<std::size_t>(rng.between(tlo, thi));
  const Net net = random_net(rng, {places, row.transitions, config.max_pre, config.max_post});
  const ObservationTrace trace = random_trace(rng, net, {config.steps, config.max_active, config.semantics});
  const std::vector<std::string> query{net.places().front()};

  const auto start = std::chrono::steady_clock::now();
  if (engine == Engine::Mbn) {
    EliminationStats stats;
    QueryOptions q;
    q.stats = &stats;
    const Posterior post = run(trace);
    row.marginal = marginal(post, query, q)[1];
    row.max_factor_wires = stats.max_factor_wires;
  } else {
    row.marginal = replay_marginal(trace, query, config.dense_limit)[1];
    row.max_factor_wires = places;
  }
  const auto stop = std::chrono::steady_clock::now();
  row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return row;
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  if (config.places.first == 0 || config.places.first > config.places.second) throw InvalidArity("empty place range");
  if (config.transitions.first > config.transitions.second) throw InvalidArity("empty transition range");
  if (config.max_pre == 0 || config.max_post == 0) throw InvalidArity("max_pre and max_post must be at least 1");
  std::vector<BenchRow> rows;
  for (std::size_t places = config.places.first; places <= config.places.second; ++places)
    for (std::size_t trial = 0; trial < config.trials; ++trial)
      for (Engine e : config.engines) {
        if (e == Engine::Dense && places > config.dense_limit) continue;
        rows.push_back(run_trial(config, places, trial, e));
      }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.places, a.trial, a.engine) < std::tie(b.places, b.trial, b.engine);
  });
  return rows;
}

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "places,transitions,trial,engine,seed,steps,runtime_ms,max_factor_wires\n";
  for (const BenchRow& r : rows) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.runtime_ms);
    os << r.places << ',' << r.transitions << ',' << r.trial << ',' << to_string(r.engine) << ',' << r.seed << ','
       << r.steps << ',' << ms << ',' << r.max_factor_wires << '\n';
  }
}

}  // namespace pmbn
