#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "alr/kmeans.hpp"
#include "alr/rng.hpp"

namespace {

Eigen::MatrixXd random_points(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  alr::Rng rng(seed);
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.normal();
  return X;
}

// The dominant cost of the RD strategies: one clustering of the pool per
// queried label, k growing to the budget.
void BM_Kmeans(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const int k = static_cast<int>(state.range(1));
  const Eigen::MatrixXd X = random_points(n, 13, 7);
  for (auto _ : state) {
    alr::Rng rng(11);
    const alr::Clustering result = alr::kmeans(X, k, rng);
    benchmark::DoNotOptimize(result.sse);
  }
}
BENCHMARK(BM_Kmeans)
    ->Args({100, 10})
    ->Args({400, 10})
    ->Args({400, 40})
    ->Unit(benchmark::kMillisecond);

void BM_KmeansSingleRun(benchmark::State& state) {
  const Eigen::MatrixXd X = random_points(400, 13, 7);
  for (auto _ : state) {
    alr::Rng rng(11);
    const alr::Clustering result = alr::kmeans_single_run(X, 20, rng, 300);
    benchmark::DoNotOptimize(result.sse);
  }
}
BENCHMARK(BM_KmeansSingleRun)->Unit(benchmark::kMillisecond);

}  // namespace
