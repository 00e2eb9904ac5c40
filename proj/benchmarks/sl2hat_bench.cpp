#include <benchmark/benchmark.h>

#include "sl2hat/characters.hpp"
#include "sl2hat/diffusion.hpp"
#include "sl2hat/markov_chain.hpp"
#include "sl2hat/tensor_decomp.hpp"
#include "sl2hat/theta_harmonic.hpp"

using namespace sl2hat;

static void BM_CharRatio(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const Weight lambda{n, n / 2, 0};
  const double a = 1.0 / static_cast<double>(n);
  const double y = 2.0 / static_cast<double>(n);
  for (auto _ : state) benchmark::DoNotOptimize(char_ratio(lambda, a, y));
}
BENCHMARK(BM_CharRatio)->Arg(10)->Arg(100)->Arg(1000);

static void BM_Decompose(benchmark::State& state) {
  const Weight lambda{3, 1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(decompose(lambda, state.range(0)));
}
BENCHMARK(BM_Decompose)->Arg(6)->Arg(12)->Arg(24);

static void BM_BuildLevelTable(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(build_level_table(n, TiltVector::theorem(n)));
}
BENCHMARK(BM_BuildLevelTable)->Arg(25)->Arg(100)->Arg(400);

static void BM_ConditionedDrift(benchmark::State& state) {
  const DomainSpec spec{1, 1};
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditioned_drift(x, 0.5, spec));
    x = x < 1.4 ? x + 0.01 : 0.1;
  }
}
BENCHMARK(BM_ConditionedDrift);

static void BM_ConditionedPath(benchmark::State& state) {
  const DomainSpec spec{1, 1};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_conditioned_path(0.5, spec, 1, 1e-3, seed++));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_ConditionedPath)->Unit(benchmark::kMillisecond);

static void BM_ScaledChain(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(scaled_chain_marginal(n, 1, 0.5, 1, 100, 7, 1));
}
BENCHMARK(BM_ScaledChain)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
