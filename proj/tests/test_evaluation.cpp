#include <doctest.h>

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "alr/error.hpp"
#include "alr/evaluation.hpp"
#include "alr/rng.hpp"
#include "alr/strategies.hpp"

using alr::Dataset;
using alr::ExperimentConfig;
using alr::StrategyKind;

namespace {

Dataset linear_dataset(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  alr::Rng rng(seed);
  Dataset ds;
  ds.name = "lin";
  ds.X.resize(n, d);
  ds.y.resize(n);
  Eigen::VectorXd w(d);
  for (Eigen::Index j = 0; j < d; ++j) w(j) = rng.normal();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) ds.X(i, j) = rng.normal();
    ds.y(i) = ds.X.row(i).dot(w) + 0.2 * rng.normal();
  }
  for (Eigen::Index j = 0; j < d; ++j)
    ds.feature_names.push_back("f" + std::to_string(j));
  return ds;
}

}  // namespace

TEST_CASE("split_pool: N=103 at 0.8 gives 82/21, sorted and disjoint") {
  alr::Rng rng(1);
  const auto split = alr::split_pool(103, 0.8, rng);
  REQUIRE(split.train.size() == 82);
  REQUIRE(split.test.size() == 21);
  std::set<Eigen::Index> all(split.train.begin(), split.train.end());
  all.insert(split.test.begin(), split.test.end());
  CHECK(all.size() == 103);
  CHECK(std::is_sorted(split.train.begin(), split.train.end()));
  CHECK(std::is_sorted(split.test.begin(), split.test.end()));

  alr::Rng rng2(1);
  const auto again = alr::split_pool(103, 0.8, rng2);
  CHECK(again.train == split.train);

  alr::Rng rng3(1);
  CHECK_THROWS_AS(alr::split_pool(4, 0.8, rng3), alr::Error);
  CHECK_THROWS_AS(alr::split_pool(10, 1.0, rng3), alr::Error);
  CHECK_THROWS_AS(alr::split_pool(10, 0.05, rng3), alr::Error);
}

TEST_CASE("compute_budget: round then clamp to [20, 60]") {
  const alr::BudgetBounds bounds;
  CHECK(alr::compute_budget(82, 0.1, bounds) == 20);   // 8.2 -> clamp up
  CHECK(alr::compute_budget(300, 0.1, bounds) == 30);  // interior
  CHECK(alr::compute_budget(3918, 0.1, bounds) == 60); // 391.8 -> clamp down
  CHECK(alr::compute_budget(295, 0.1, bounds) == 30);  // 29.5 rounds half up
  CHECK_THROWS_AS(alr::compute_budget(15, 0.1, bounds), alr::Error);

  int previous = 0;
  for (std::size_t pool = 20; pool <= 700; ++pool) {
    const int m = alr::compute_budget(pool, 0.1, bounds);
    CHECK(m >= previous);
    CHECK(m >= bounds.min);
    CHECK(m <= bounds.max);
    previous = m;
  }
}

TEST_CASE("transductive hand fixture: y'={0,1.5,1.5}") {
  Dataset ds;
  ds.name = "fix";
  ds.X.resize(3, 1);
  ds.X << 0, 1, 2;
  ds.y.resize(3);
  ds.y << 0, 1, 2;

  alr::RidgeModel constant;
  constant.w = Eigen::VectorXd::Zero(1);
  constant.b = 1.5;

  const auto m = alr::transductive_metrics(ds, {0, 1, 2}, {0}, constant);
  CHECK(m.rmse == doctest::Approx(std::sqrt(0.5 / 3.0)).epsilon(1e-5));
  CHECK(m.cc == doctest::Approx(1.5 / std::sqrt(3.0)).epsilon(1e-5));
  CHECK(m.cc_defined);
}

TEST_CASE("transductive metrics with everything labeled are exact") {
  Dataset ds = linear_dataset(8, 2, 3);
  alr::RidgeModel junk;
  junk.w = Eigen::VectorXd::Constant(2, 123.0);
  junk.b = -7.0;
  const auto m = alr::transductive_metrics(ds, {0, 1, 2, 3, 4, 5, 6, 7},
                                           {0, 1, 2, 3, 4, 5, 6, 7}, junk);
  CHECK(m.rmse == 0.0);
  CHECK(m.cc == doctest::Approx(1.0));
}

TEST_CASE("inductive shift identity: predictions = truth + c") {
  Dataset ds;
  ds.name = "shift";
  ds.X.resize(3, 1);
  ds.X << 1, 2, 3;
  ds.y.resize(3);
  ds.y << 1, 2, 3;

  alr::RidgeModel model;  // predicts y + 5
  model.w = Eigen::VectorXd::Ones(1);
  model.b = 5.0;
  const auto m = alr::inductive_metrics(ds, {0, 1, 2}, model);
  CHECK(m.rmse == doctest::Approx(5.0));
  CHECK(m.cc == doctest::Approx(1.0));
}

TEST_CASE("constant truth makes CC undefined, flagged not NaN") {
  Dataset ds;
  ds.name = "const";
  ds.X.resize(3, 1);
  ds.X << 1, 2, 3;
  ds.y = Eigen::VectorXd::Constant(3, 4.0);
  alr::RidgeModel model;
  model.w = Eigen::VectorXd::Ones(1);
  model.b = 0.0;
  const auto m = alr::inductive_metrics(ds, {0, 1, 2}, model);
  CHECK(!m.cc_defined);
  CHECK(std::isfinite(m.cc));
  CHECK(m.rmse > 0.0);
}

TEST_CASE("split seeds pair strategies; strategy seeds separate them") {
  const auto s1 = alr::split_seed(1, "ds", 0);
  const auto s2 = alr::split_seed(1, "ds", 1);
  CHECK(s1 != s2);
  CHECK(s1 == alr::split_seed(1, "ds", 0));

  const auto q1 = alr::strategy_seed(1, "ds", StrategyKind::QBC, 0);
  const auto q2 = alr::strategy_seed(1, "ds", StrategyKind::GS, 0);
  CHECK(q1 != q2);
  CHECK(q1 != s1);
}

TEST_CASE("evaluate_single_run: paired splits and full curves") {
  const Dataset ds = linear_dataset(40, 3, 9);
  ExperimentConfig cfg;
  cfg.runs = 2;
  cfg.budget_bounds = {5, 12};

  const auto bl = alr::evaluate_single_run(ds, StrategyKind::BL, 0, cfg);
  const auto rd = alr::evaluate_single_run(ds, StrategyKind::RD, 0, cfg);

  CHECK(bl.pool_seed == rd.pool_seed);  // shared split per run
  CHECK(bl.m_start == 3);

  // floor(0.8*40)=32 pool, round(3.2)=3 -> clamp to 5.
  REQUIRE(bl.query_order.size() == 5);
  REQUIRE(bl.rmse_t.size() == 3);  // m = 3,4,5
  REQUIRE(bl.cc_t.size() == 3);
  REQUIRE(bl.rmse_i.size() == 3);

  alr::Rng rng(bl.pool_seed);
  const auto split = alr::split_pool(40, 0.8, rng);
  std::set<Eigen::Index> pool(split.train.begin(), split.train.end());
  for (Eigen::Index q : bl.query_order) CHECK(pool.count(q) == 1);

  const auto other_run = alr::evaluate_single_run(ds, StrategyKind::BL, 1, cfg);
  CHECK(other_run.pool_seed != bl.pool_seed);
}

TEST_CASE("full labeling drives transductive RMSE to 0 and CC to 1") {
  const Dataset ds = linear_dataset(30, 3, 11);
  ExperimentConfig cfg;
  cfg.budget_fraction = 1.0;  // M = |P80| = 24
  cfg.budget_bounds = {20, 60};

  for (StrategyKind kind : {StrategyKind::BL, StrategyKind::RD_EMCM}) {
    const auto run = alr::evaluate_single_run(ds, kind, 0, cfg);
    REQUIRE(run.query_order.size() == 24);
    CHECK(run.rmse_t.back() == 0.0);
    CHECK(run.cc_t.back() == doctest::Approx(1.0));
  }
}

TEST_CASE("run_experiment output is independent of the jobs count") {
  const Dataset ds = linear_dataset(40, 3, 13);
  ExperimentConfig cfg;
  cfg.runs = 4;
  cfg.budget_bounds = {5, 10};
  const std::vector<StrategyKind> strategies = {StrategyKind::BL,
                                                StrategyKind::QBC,
                                                StrategyKind::RD};

  const auto serial = alr::run_experiment(ds, strategies, cfg, 1);
  const auto parallel = alr::run_experiment(ds, strategies, cfg, 4);

  REQUIRE(serial.runs.size() == parallel.runs.size());
  for (std::size_t s = 0; s < serial.runs.size(); ++s) {
    for (std::size_t r = 0; r < serial.runs[s].size(); ++r) {
      CHECK(serial.runs[s][r].query_order == parallel.runs[s][r].query_order);
      CHECK(serial.runs[s][r].rmse_t == parallel.runs[s][r].rmse_t);
      CHECK(serial.runs[s][r].cc_i == parallel.runs[s][r].cc_i);
    }
    CHECK(serial.curves[s].mean_rmse_t == parallel.curves[s].mean_rmse_t);
    CHECK(serial.curves[s].auc_rmse_t == parallel.curves[s].auc_rmse_t);
  }
  CHECK(serial.pool_size == 32);
  CHECK(serial.budget == 5);
}

TEST_CASE("aggregate_curves averages runs and counts defined CCs") {
  alr::RunResult a;
  a.kind = StrategyKind::BL;
  a.m_start = 2;
  a.rmse_t = {1.0, 2.0};
  a.cc_t = {0.5, 0.0};
  a.cc_t_defined = {1, 0};
  a.rmse_i = {3.0, 4.0};
  a.cc_i = {0.1, 0.2};
  a.cc_i_defined = {1, 1};

  alr::RunResult b = a;
  b.run = 1;
  b.rmse_t = {3.0, 6.0};
  b.cc_t = {0.7, 0.0};
  b.cc_t_defined = {1, 0};

  const auto curves =
      alr::aggregate_curves({StrategyKind::BL}, {{a, b}});
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].mean_rmse_t[0] == doctest::Approx(2.0));
  CHECK(curves[0].mean_rmse_t[1] == doctest::Approx(4.0));
  CHECK(curves[0].mean_cc_t[0] == doctest::Approx(0.6));
  CHECK(std::isnan(curves[0].mean_cc_t[1]));  // zero defined runs
  CHECK(curves[0].cc_t_defined_runs[0] == 2);
  CHECK(curves[0].cc_t_defined_runs[1] == 0);
}

TEST_CASE("compute_auc: trapezoid on the integer grid") {
  CHECK(alr::compute_auc({5.0, 5.0, 5.0}) == doctest::Approx(10.0));  // 2c
  // linear a..b over [d, M]: (a+b)(M-d)/2
  CHECK(alr::compute_auc({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(7.5));
  CHECK(alr::compute_auc({1.0, 4.0, 2.0}) == doctest::Approx(5.5));
  CHECK_THROWS_AS(alr::compute_auc({1.0}), alr::Error);
}

TEST_CASE("normalize_and_rank: BL anchor, average ranks, NaN last") {
  const std::vector<StrategyKind> strategies = {StrategyKind::BL,
                                                StrategyKind::QBC,
                                                StrategyKind::RD};
  Eigen::MatrixXd auc(2, 3);
  auc << 2.0, 1.0, 1.0,  // ds1: QBC and RD tie ahead of BL
      4.0, 2.0, 8.0;     // ds2

  const auto table =
      alr::normalize_and_rank({"d1", "d2"}, strategies, auc, true);
  CHECK(table.normalized(0, 0) == doctest::Approx(1.0));
  CHECK(table.normalized(0, 1) == doctest::Approx(0.5));
  CHECK(table.normalized(1, 2) == doctest::Approx(2.0));

  CHECK(table.ranks(0, 0) == doctest::Approx(3.0));
  CHECK(table.ranks(0, 1) == doctest::Approx(1.5));  // tie -> average rank
  CHECK(table.ranks(0, 2) == doctest::Approx(1.5));
  CHECK(table.ranks(1, 1) == doctest::Approx(1.0));
  CHECK(table.ranks(1, 2) == doctest::Approx(3.0));
  CHECK(table.average_rank(0) == doctest::Approx(2.5));

  // Larger-is-better flips the order.
  const auto cc_table =
      alr::normalize_and_rank({"d1", "d2"}, strategies, auc, false);
  CHECK(cc_table.ranks(0, 0) == doctest::Approx(1.0));

  // NaN AUC ranks last.
  Eigen::MatrixXd with_nan = auc;
  with_nan(0, 1) = std::numeric_limits<double>::quiet_NaN();
  const auto nan_table =
      alr::normalize_and_rank({"d1", "d2"}, strategies, with_nan, true);
  CHECK(nan_table.ranks(0, 1) == doctest::Approx(3.0));

  // Missing BL or a zero anchor is an error.
  Eigen::MatrixXd zero_bl = auc;
  zero_bl(0, 0) = 0.0;
  CHECK_THROWS_AS(alr::normalize_and_rank({"d1", "d2"}, strategies, zero_bl, true),
                  alr::Error);
  CHECK_THROWS_AS(alr::normalize_and_rank({"d1", "d2"},
                                          {StrategyKind::QBC, StrategyKind::RD,
                                           StrategyKind::GS},
                                          auc, true),
                  alr::Error);
}

TEST_CASE("identical AUCs across nine strategies all rank 5") {
  const auto& kinds = alr::all_strategy_kinds();
  std::vector<StrategyKind> nine(kinds.begin(), kinds.begin() + 9);
  Eigen::MatrixXd auc = Eigen::MatrixXd::Constant(1, 9, 3.0);
  const auto table = alr::normalize_and_rank({"d"}, nine, auc, true);
  for (Eigen::Index s = 0; s < 9; ++s)
    CHECK(table.ranks(0, s) == doctest::Approx(5.0));
}

TEST_CASE("project_pca2: axis-aligned data passes through") {
  Eigen::MatrixXd x(4, 2);
  x << -2, 0, 0, 1, 2, 0, 0, -1;  // zero mean, covariance diag(8/3, 2/3)
  const Eigen::MatrixXd p = alr::project_pca2(x);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(p(i, 0) == doctest::Approx(x(i, 0)).epsilon(1e-12));
    CHECK(p(i, 1) == doctest::Approx(x(i, 1)).epsilon(1e-12));
  }
}

TEST_CASE("project_pca2: 3-point fixture matches the hand eigensolve") {
  Eigen::MatrixXd x(3, 2);
  x << 0, 0, 1, 0, 0, 1;
  // Covariance [[1/3,-1/6],[-1/6,1/3]]; top component (1,-1)/sqrt(2).
  const Eigen::MatrixXd p = alr::project_pca2(x);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(p(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p(1, 0) == doctest::Approx(s).epsilon(1e-12));
  CHECK(p(2, 0) == doctest::Approx(-s).epsilon(1e-12));
  CHECK(p(0, 1) == doctest::Approx(-2.0 / 3.0 * s).epsilon(1e-9));
  CHECK(p(1, 1) == doctest::Approx(1.0 / 3.0 * s).epsilon(1e-9));
  CHECK(p(2, 1) == doctest::Approx(1.0 / 3.0 * s).epsilon(1e-9));

  // First output column always carries at least as much variance.
  const double v1 = p.col(0).squaredNorm();
  const double v2 = p.col(1).squaredNorm();
  CHECK(v1 >= v2);
}

TEST_CASE("project_pca2 flags rank-deficient covariance") {
  Eigen::MatrixXd x(5, 2);
  for (Eigen::Index i = 0; i < 5; ++i) {
    x(i, 0) = static_cast<double>(i);
    x(i, 1) = 2.0 * static_cast<double>(i);
  }
  bool deficient = false;
  const Eigen::MatrixXd p = alr::project_pca2(x, &deficient);
  CHECK(deficient);
  CHECK(p.col(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.col(0).cwiseAbs().maxCoeff() > 0.0);
}
