// Microbenchmarks for the counting kernels: the transfer-operator walk
// (the performance-critical path) and incidence construction.

#include <benchmark/benchmark.h>

#include "chains/census.hpp"
#include "chains/config.hpp"
#include "chains/energy.hpp"
#include "chains/esgk.hpp"

namespace {

using namespace chains;

void BM_EnergyChain(benchmark::State& state) {
  const auto config = gen_lattice(static_cast<int>(state.range(0)));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy_chain(config, n, ChainMode::Repeats));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EnergyChain)->Args({3, 2})->Args({4, 2})->Args({5, 2})->Args({4, 4});

void BM_EnergyChainWorkers(benchmark::State& state) {
  const auto config = gen_lattice(4);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy_chain(config, 3, ChainMode::Repeats, {}, workers));
  }
}
BENCHMARK(BM_EnergyChainWorkers)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_DeltaCensus(benchmark::State& state) {
  const auto config = gen_lattice(static_cast<int>(state.range(0)));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(delta_n_census(config, n, ChainMode::Repeats));
  }
}
BENCHMARK(BM_DeltaCensus)->Args({3, 2})->Args({4, 2})->Args({3, 3});

void BM_BuildIncidence(benchmark::State& state) {
  const auto config = gen_lattice(static_cast<int>(state.range(0)));
  const auto lines = build_lines(config, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_incidence(lines));
  }
}
BENCHMARK(BM_BuildIncidence)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
