#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <numeric>
#include <vector>

#include "alr/evaluation.hpp"
#include "alr/strategies.hpp"
#include "alr/synthetic.hpp"

namespace {

const alr::Dataset& blob_dataset() {
  static const alr::Dataset ds = alr::make_two_blob_dataset(3);
  return ds;
}

alr::PoolState seeded_state() {
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(blob_dataset().n()));
  std::iota(pool.begin(), pool.end(), 0);
  return alr::PoolState(blob_dataset(), pool, 17);
}

void BM_SelectQbc(benchmark::State& state) {
  for (auto _ : state) {
    alr::PoolState pool = seeded_state();
    const auto labeled = alr::init_random(pool, 12);
    benchmark::DoNotOptimize(alr::select_qbc(pool, pool.selectable(), 4));
  }
}
BENCHMARK(BM_SelectQbc);

void BM_SelectGs(benchmark::State& state) {
  for (auto _ : state) {
    alr::PoolState pool = seeded_state();
    const auto labeled = alr::init_random(pool, 12);
    benchmark::DoNotOptimize(alr::select_gs(pool, pool.selectable()));
  }
}
BENCHMARK(BM_SelectGs);

// Whole-run cost of the composite strategy, the most expensive kind.
void BM_RunStrategy(benchmark::State& state) {
  const alr::StrategyKind kind = static_cast<alr::StrategyKind>(state.range(0));
  alr::StrategySpec spec;
  spec.kind = kind;
  for (auto _ : state) {
    alr::PoolState pool = seeded_state();
    const auto order = alr::run_strategy(spec, pool, 20);
    benchmark::DoNotOptimize(order.back());
  }
}
BENCHMARK(BM_RunStrategy)
    ->Arg(static_cast<int>(alr::StrategyKind::BL))
    ->Arg(static_cast<int>(alr::StrategyKind::EMCM))
    ->Arg(static_cast<int>(alr::StrategyKind::RD_EMCM))
    ->Unit(benchmark::kMillisecond);

void BM_EvaluateSingleRun(benchmark::State& state) {
  alr::ExperimentConfig config;
  for (auto _ : state) {
    const alr::RunResult result = alr::evaluate_single_run(
        blob_dataset(), alr::StrategyKind::RD_EMCM, 0, config);
    benchmark::DoNotOptimize(result.rmse_t.back());
  }
}
BENCHMARK(BM_EvaluateSingleRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
