#include <benchmark/benchmark.h>

#include <random>

#include "qnetsim/matching.hpp"
#include "qnetsim/purify.hpp"
#include "qnetsim/repeater.hpp"
#include "qnetsim/toric.hpp"

using namespace qnet;

static void BM_RunLevel(benchmark::State& state) {
  const NoiseModel noise = NoiseModel::paper(0.1);
  const int level = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_level(level, noise).infidelity);
  }
}
BENCHMARK(BM_RunLevel)->Arg(1)->Arg(2)->Arg(3);

static void BM_FuseChain(benchmark::State& state) {
  const NoiseModel noise{0.1, 0.0, 1e-3, 5e-4};
  const DensityMatrix pair = run_level(3, noise).state;
  const std::vector<DensityMatrix> pairs(std::size_t(state.range(0)), pair);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuse_chain(pairs, noise).norm());
  }
}
BENCHMARK(BM_FuseChain)->Arg(4)->Arg(12);

static void BM_MarkovCost(benchmark::State& state) {
  const NoiseModel noise = NoiseModel::paper(0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        markov_cost_parallel(3, noise, state.range(0), 1, 1).mean_raw_pairs);
  }
}
BENCHMARK(BM_MarkovCost)->Arg(10000)->Arg(100000);

static void BM_Matching(benchmark::State& state) {
  const int n = int(state.range(0));
  std::mt19937_64 eng(1);
  std::uniform_int_distribution<long long> d(1, 100);
  std::vector<std::vector<long long>> dist(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) dist[i][j] = dist[j][i] = d(eng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_weight_perfect_matching(dist).front());
  }
}
BENCHMARK(BM_Matching)->Arg(16)->Arg(64)->Arg(128);

static void BM_LogicalErrorTrial(benchmark::State& state) {
  ParityErrorTable star;
  star.parity_basis = Basis::Z;
  star.entries = {{PauliString::identity(4), false, 0.92},
                  {PauliString::identity(4), true, 0.05},
                  {PauliString::parse("XIII"), false, 0.03}};
  ParityErrorTable plaq;
  plaq.parity_basis = Basis::X;
  plaq.entries = {{PauliString::identity(4), false, 0.92},
                  {PauliString::identity(4), true, 0.05},
                  {PauliString::parse("ZIII"), false, 0.03}};
  const ToricLattice lat(int(state.range(0)));
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(logical_error_trial(lat, star, plaq, 4 * lat.l(), rng).any());
  }
}
BENCHMARK(BM_LogicalErrorTrial)->Arg(4)->Arg(8)->Arg(12);

BENCHMARK_MAIN();
