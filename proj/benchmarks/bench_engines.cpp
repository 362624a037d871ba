#include <benchmark/benchmark.h>

#include "petrimbn/bench.hpp"
#include "petrimbn/reason.hpp"

using namespace pmbn;

namespace {

ObservationTrace instance(std::size_t places) {
  Rng gen(places * 31 + 7);
  const Net net = random_net(gen, {places, places, 3, 3});
  return random_trace(gen, net, {10, 5, Semantics::Independent});
}

void BM_NetworkMarginal(benchmark::State& state) {
  const ObservationTrace trace = instance(static_cast<std::size_t>(state.range(0)));
  const std::string place = trace.net.places()[0];
  for (auto _ : state) {
    const Posterior post = run(trace);
    benchmark::DoNotOptimize(marginal(post, {place}));
  }
}
BENCHMARK(BM_NetworkMarginal)->DenseRange(10, 25, 5)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_DenseMarginal(benchmark::State& state) {
  const ObservationTrace trace = instance(static_cast<std::size_t>(state.range(0)));
  const std::string place = trace.net.places()[0];
  for (auto _ : state) benchmark::DoNotOptimize(replay_marginal(trace, {place}));
}
BENCHMARK(BM_DenseMarginal)->DenseRange(10, 20, 5)->Unit(benchmark::kMillisecond);

void BM_MinDegreeOrder(benchmark::State& state) {
  const ObservationTrace trace = instance(static_cast<std::size_t>(state.range(0)));
  const Posterior post = run(trace);
  const Mbn kept = terminate(post.mbn, {trace.net.places()[0]});
  for (auto _ : state) benchmark::DoNotOptimize(min_degree_order(kept));
}
BENCHMARK(BM_MinDegreeOrder)->Arg(25)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
