// Microbenchmarks for the hot paths: transfer-matrix CDF evaluation, series
// extraction, dominant-root solving, pole/limit CDFs, moment summation, and
// the Monte Carlo step loop.
#include <benchmark/benchmark.h>

#include <cstdint>

#include "walkmax/distribution.hpp"
#include "walkmax/gumbel.hpp"
#include "walkmax/params.hpp"
#include "walkmax/roots.hpp"
#include "walkmax/rq.hpp"
#include "walkmax/simulate.hpp"
#include "walkmax/transfer.hpp"
#include "walkmax/transfer_exact.hpp"

namespace {

using namespace walkmax;

const WalkParams kP13 = validate_params("1/3");
const WalkParams kP37 = validate_params("3/7");

Scenario scenario_for(std::int64_t which) {
  switch (which) {
    case 0: return Scenario::strong();
    case 1: return Scenario::weak();
    default: return Scenario::traffic(1);
  }
}

void BM_MatrixPowerCdf(benchmark::State& state) {
  const Scenario s = scenario_for(state.range(0));
  const std::int64_t n = state.range(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cdf_matrix_power(s, kP13, TimeIndex::steps(n), 20));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_MatrixPowerCdf)
    ->Args({0, 2000})
    ->Args({1, 2000})
    ->Args({2, 2000})
    ->Args({0, 20000});

void BM_RationalMatrixPowerCdf(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cdf_matrix_power_exact(Scenario::strong(), kP13,
                               TimeIndex::steps(64), 8));
  }
}
BENCHMARK(BM_RationalMatrixPowerCdf);

void BM_SeriesCdf(benchmark::State& state) {
  const Scenario s = scenario_for(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(series_cdf(s, kP13, 20, 200));
  }
}
BENCHMARK(BM_SeriesCdf)->Arg(0)->Arg(1)->Arg(2);

void BM_SolveRoot(benchmark::State& state) {
  const Scenario s = scenario_for(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_root(s, kP37, k));
  }
}
BENCHMARK(BM_SolveRoot)->Args({0, 10})->Args({0, 40})->Args({1, 40});

void BM_PoleCdf(benchmark::State& state) {
  const Scenario s = scenario_for(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pole_cdf(s, kP13, TimeIndex::steps(1000000), 20));
  }
}
BENCHMARK(BM_PoleCdf)->Arg(0)->Arg(1)->Arg(2);

void BM_GumbelCdf(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gumbel_cdf(Scenario::strong(), kP13, TimeIndex::steps(1000000), 20));
  }
}
BENCHMARK(BM_GumbelCdf);

void BM_ExactMomentsPole(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_moments(Scenario::strong(), kP13,
                                           TimeIndex::steps(1000000),
                                           CdfSource::PoleApprox));
  }
}
BENCHMARK(BM_ExactMomentsPole);

void BM_SimulateMax(benchmark::State& state) {
  const Scenario s = scenario_for(state.range(0));
  const std::int64_t n = state.range(1);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_max(s, kP13, n, 12345, trial++));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SimulateMax)
    ->Args({0, 100000})
    ->Args({1, 100000})
    ->Args({2, 100000});

void BM_RunEnsemble(benchmark::State& state) {
  SimConfig cfg;
  cfg.scenario = Scenario::strong();
  cfg.params = kP13;
  cfg.n_steps = 10000;
  cfg.trials = 1000;
  cfg.base_seed = 99;
  cfg.workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_ensemble(cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.n_steps * cfg.trials);
}
BENCHMARK(BM_RunEnsemble)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
