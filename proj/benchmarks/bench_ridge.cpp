#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "alr/ridge.hpp"
#include "alr/rng.hpp"

namespace {

void fill_problem(Eigen::MatrixXd& X, Eigen::VectorXd& y, alr::Rng& rng) {
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = rng.normal();
    y(i) = rng.normal();
  }
}

void BM_FitRidge(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::Index d = state.range(1);
  alr::Rng rng(1);
  Eigen::MatrixXd X(n, d);
  Eigen::VectorXd y(n);
  fill_problem(X, y, rng);
  for (auto _ : state) {
    const alr::RidgeModel model = alr::fit_ridge(X, y, 0.01);
    benchmark::DoNotOptimize(model.b);
  }
}
BENCHMARK(BM_FitRidge)->Args({20, 5})->Args({60, 13})->Args({400, 13});

void BM_BootstrapCommittee(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  alr::Rng rng(2);
  Eigen::MatrixXd X(n, 8);
  Eigen::VectorXd y(n);
  fill_problem(X, y, rng);
  for (auto _ : state) {
    alr::Rng draw(3);
    const auto committee = alr::bootstrap_committee(X, y, 4, 0.01, draw);
    benchmark::DoNotOptimize(committee.back().b);
  }
}
BENCHMARK(BM_BootstrapCommittee)->Arg(20)->Arg(60);

}  // namespace
