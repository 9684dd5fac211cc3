#include <benchmark/benchmark.h>

#include "carnot/carnot.hpp"
#include "support/generators.hpp"

namespace {

using namespace carnot;
namespace gen = carnot::testing;

void BM_Diagonalize(benchmark::State& state) {
  gen::Rng rng(11);
  const auto spec = gen::random_stationary_spec(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize_reservoir(spec));
}
BENCHMARK(BM_Diagonalize)->RangeMultiplier(2)->Range(2, 64);

void BM_HeatFlows(benchmark::State& state) {
  gen::Rng rng(12);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto hot = gen::random_thermal(rng, n, 5.0, 0.5 * n);
  const auto cold = gen::random_thermal(rng, n, 1.0, 0.5 * n);
  CouplingOperator engine(1.0);
  for (const auto& idx : canonical_tuples(hot, cold)) engine.add(idx, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(heat_flows(hot, cold, engine));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(engine.size()));
}
BENCHMARK(BM_HeatFlows)->RangeMultiplier(2)->Range(2, 16);

void BM_GeneralizedBound(benchmark::State& state) {
  gen::Rng rng(13);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto hot = gen::random_nonthermal(rng, n, 0.5 * n);
  const auto cold = gen::random_nonthermal(rng, n, 0.5 * n);
  for (auto _ : state) benchmark::DoNotOptimize(generalized_bound(hot, cold));
}
BENCHMARK(BM_GeneralizedBound)->RangeMultiplier(2)->Range(2, 32);

void BM_Sweep(benchmark::State& state) {
  gen::Rng rng(14);
  const auto hot = gen::random_thermal(rng, 6, 5.0);
  const auto cold = gen::random_thermal(rng, 6, 1.0);
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sweep_random_engines(hot, cold, trials, 1, 0.8));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sweep)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
