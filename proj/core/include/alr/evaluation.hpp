#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "alr/dataset.hpp"
#include "alr/ridge.hpp"
#include "alr/rng.hpp"
#include "alr/strategies.hpp"

namespace alr {

struct BudgetBounds {
  int min = 20;
  int max = 60;
};

// Knobs of the repeated-evaluation protocol. Defaults follow the benchmark
// setup: 100 runs, 80/20 split, budget 10% of the pool clamped to [20, 60],
// ridge sigma 0.01.
struct ExperimentConfig {
  int runs = 100;
  double train_fraction = 0.8;
  double budget_fraction = 0.1;
  BudgetBounds budget_bounds;
  double sigma = 0.01;
  int committee_size = 4;
  double ebmalr_gamma = 0.05;
  KmeansOptions kmeans;
  std::uint64_t base_seed = 1;

  void validate() const;
  StrategySpec strategy_spec(StrategyKind kind) const;
};

struct PoolSplit {
  std::vector<Eigen::Index> train;  // the pool the strategies query, ascending
  std::vector<Eigen::Index> test;   // held out for inductive metrics, ascending
};

// floor(train_fraction * N) rows drawn uniformly without replacement; the
// complement is the inductive test set. Rejects splits with an empty side.
PoolSplit split_pool(Eigen::Index n, double train_fraction, Rng& rng);

// clamp(round(budget_fraction * pool_size), bounds.min, bounds.max).
int compute_budget(std::size_t pool_size, double budget_fraction,
                   const BudgetBounds& bounds);

struct MetricPair {
  double rmse = 0.0;
  double cc = 0.0;
  bool cc_defined = true;  // false when y or y' is constant over the scope
};

// Composite transductive metrics over the pool: y' carries true labels on
// the selected rows and model predictions elsewhere; RMSE and CC are then
// computed between y and y' over the whole pool.
MetricPair transductive_metrics(const Dataset& dataset,
                                const std::vector<Eigen::Index>& pool_rows,
                                const std::vector<Eigen::Index>& labeled_rows,
                                const RidgeModel& model);

// Plain RMSE/CC of model predictions against truth on the held-out rows.
MetricPair inductive_metrics(const Dataset& dataset,
                             const std::vector<Eigen::Index>& test_rows,
                             const RidgeModel& model);

// Metric curves of one (strategy, run): entry t corresponds to m = m_start+t
// labeled samples, m_start = d (right after initialization).
struct RunResult {
  StrategyKind kind = StrategyKind::BL;
  int run = 0;
  std::uint64_t pool_seed = 0;
  int m_start = 0;
  std::vector<Eigen::Index> query_order;
  std::vector<double> rmse_t;
  std::vector<double> cc_t;
  std::vector<std::uint8_t> cc_t_defined;
  std::vector<double> rmse_i;
  std::vector<double> cc_i;
  std::vector<std::uint8_t> cc_i_defined;
};

// Deterministic sub-seeds. The split depends on (dataset, run) only, so all
// strategies of a run share the same pool (paired comparison); the strategy
// stream additionally hashes the strategy name so it is independent of which
// strategies are enabled and of scheduling.
std::uint64_t split_seed(std::uint64_t base_seed, const std::string& dataset_name,
                         int run);
std::uint64_t strategy_seed(std::uint64_t base_seed, const std::string& dataset_name,
                            StrategyKind kind, int run);

// One full active-learning run: shared split, query sequence, and both metric
// pairs after every label from m = d to m = M.
RunResult evaluate_single_run(const Dataset& dataset, StrategyKind kind, int run,
                              const ExperimentConfig& config);

struct StrategyCurves {
  StrategyKind kind = StrategyKind::BL;
  std::vector<double> mean_rmse_t;
  std::vector<double> mean_cc_t;
  std::vector<double> mean_rmse_i;
  std::vector<double> mean_cc_i;
  // Runs with a defined CC per curve point; CC means are over those only.
  std::vector<int> cc_t_defined_runs;
  std::vector<int> cc_i_defined_runs;
  double auc_rmse_t = 0.0;
  double auc_cc_t = 0.0;
  double auc_rmse_i = 0.0;
  double auc_cc_i = 0.0;
};

struct DatasetResults {
  std::string dataset;
  Eigen::Index n = 0;
  Eigen::Index dim = 0;
  std::size_t pool_size = 0;  // |P80|
  int m_start = 0;            // d
  int budget = 0;             // M
  std::vector<StrategyKind> strategies;
  std::vector<std::vector<RunResult>> runs;  // [strategy][run]
  std::vector<StrategyCurves> curves;        // aggregated, same order
};

// Aggregates mean curves and their AUCs from per-run results. Deterministic:
// sums run in run-index order whatever order the runs were produced in.
std::vector<StrategyCurves> aggregate_curves(
    const std::vector<StrategyKind>& strategies,
    const std::vector<std::vector<RunResult>>& runs);

// Runs every (strategy, run) pair, optionally on `jobs` worker threads.
// Output is byte-identical for any jobs value.
DatasetResults run_experiment(const Dataset& dataset,
                              const std::vector<StrategyKind>& strategies,
                              const ExperimentConfig& config, int jobs = 1);

// Composite trapezoid over the integer budget grid m = d..M.
double compute_auc(const std::vector<double>& mean_curve);

// AUC table over several datasets normalized by the BL column, with
// per-dataset ranks (1 = best) and average-rank row. Exact ties get average
// ranks; an undefined AUC (possible for CC) ranks last.
struct RankTable {
  std::vector<std::string> datasets;
  std::vector<StrategyKind> strategies;
  Eigen::MatrixXd auc;         // datasets x strategies
  Eigen::MatrixXd normalized;  // row-wise auc / auc(BL)
  Eigen::MatrixXd ranks;       // datasets x strategies
  Eigen::VectorXd average_rank;
};
RankTable normalize_and_rank(const std::vector<std::string>& datasets,
                             const std::vector<StrategyKind>& strategies,
                             const Eigen::MatrixXd& auc, bool smaller_is_better);

// Projection onto the top-2 principal components of the feature covariance.
// Sign convention: the largest-magnitude loading of each component is
// positive. A rank-1 covariance yields a zero second column and sets
// *rank_deficient.
Eigen::MatrixXd project_pca2(const Eigen::Ref<const Eigen::MatrixXd>& X,
                             bool* rank_deficient = nullptr);

}  // namespace alr
