#include "alr/evaluation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "alr/error.hpp"

namespace alr {

void ExperimentConfig::validate() const {
  if (runs < 1) throw config_error("runs must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw config_error("train_fraction must be in (0, 1)");
  }
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0)) {
    throw config_error("budget_fraction must be in (0, 1]");
  }
  if (budget_bounds.min > budget_bounds.max) {
    throw config_error("budget bounds: min exceeds max");
  }
  if (sigma < 0.0) throw config_error("sigma must be >= 0");
  if (committee_size < 2) throw config_error("committee_size must be >= 2");
  if (ebmalr_gamma < 0.0 || ebmalr_gamma >= 0.5) {
    throw config_error("ebmalr_gamma must be in [0, 0.5)");
  }
  if (kmeans.restarts < 1 || kmeans.max_iter < 1) {
    throw config_error("kmeans restarts/max_iter must be positive");
  }
}

StrategySpec ExperimentConfig::strategy_spec(StrategyKind kind) const {
  StrategySpec spec;
  spec.kind = kind;
  spec.committee_size = committee_size;
  spec.ebmalr_gamma = ebmalr_gamma;
  spec.sigma = sigma;
  spec.kmeans = kmeans;
  return spec;
}

PoolSplit split_pool(Eigen::Index n, double train_fraction, Rng& rng) {
  if (n < 5) throw invalid_argument_error("split_pool: need at least 5 samples");
  const auto n_train = static_cast<Eigen::Index>(
      std::floor(train_fraction * static_cast<double>(n)));
  if (n_train < 1) throw invalid_argument_error("split_pool: empty training pool");
  if (n_train >= n) throw invalid_argument_error("split_pool: empty test set");

  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  auto train = rng.sample_without_replacement(all, static_cast<std::size_t>(n_train));

  PoolSplit split;
  split.train = std::move(train);
  std::sort(split.train.begin(), split.train.end());
  std::vector<std::uint8_t> in_train(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i : split.train) in_train[static_cast<std::size_t>(i)] = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!in_train[static_cast<std::size_t>(i)]) split.test.push_back(i);
  }
  return split;
}

int compute_budget(std::size_t pool_size, double budget_fraction,
                   const BudgetBounds& bounds) {
  if (pool_size < static_cast<std::size_t>(bounds.min)) {
    throw invalid_argument_error("compute_budget: pool of " +
                                 std::to_string(pool_size) +
                                 " is below the minimum budget " +
                                 std::to_string(bounds.min));
  }
  const long rounded =
      std::lround(budget_fraction * static_cast<double>(pool_size));
  return std::clamp(static_cast<int>(rounded), bounds.min, bounds.max);
}

namespace {

MetricPair metrics_between(const Eigen::VectorXd& truth,
                           const Eigen::VectorXd& composite) {
  const auto n = static_cast<double>(truth.size());
  MetricPair out;
  out.rmse = std::sqrt((truth - composite).squaredNorm() / n);

  const double mean_y = truth.mean();
  const double mean_c = composite.mean();
  const Eigen::VectorXd dy = truth.array() - mean_y;
  const Eigen::VectorXd dc = composite.array() - mean_c;
  const double den = std::sqrt(dy.squaredNorm()) * std::sqrt(dc.squaredNorm());
  if (den == 0.0) {
    out.cc = 0.0;
    out.cc_defined = false;
  } else {
    out.cc = dy.dot(dc) / den;
  }
  return out;
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& X,
                            const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
  }
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& y,
                       const std::vector<Eigen::Index>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = y(rows[i]);
  }
  return out;
}

}  // namespace

MetricPair transductive_metrics(const Dataset& dataset,
                                const std::vector<Eigen::Index>& pool_rows,
                                const std::vector<Eigen::Index>& labeled_rows,
                                const RidgeModel& model) {
  if (labeled_rows.empty()) {
    throw invalid_argument_error("transductive_metrics: no labeled samples");
  }
  std::vector<std::uint8_t> labeled(static_cast<std::size_t>(dataset.n()), 0);
  for (Eigen::Index row : labeled_rows) {
    labeled[static_cast<std::size_t>(row)] = 1;
  }

  const Eigen::VectorXd truth = gather(dataset.y, pool_rows);
  Eigen::VectorXd composite =
      predict(model, gather_rows(dataset.X, pool_rows));
  for (std::size_t i = 0; i < pool_rows.size(); ++i) {
    if (labeled[static_cast<std::size_t>(pool_rows[i])]) {
      composite(static_cast<Eigen::Index>(i)) = truth(static_cast<Eigen::Index>(i));
    }
  }
  return metrics_between(truth, composite);
}

MetricPair inductive_metrics(const Dataset& dataset,
                             const std::vector<Eigen::Index>& test_rows,
                             const RidgeModel& model) {
  if (test_rows.empty()) {
    throw invalid_argument_error("inductive_metrics: empty test set");
  }
  const Eigen::VectorXd truth = gather(dataset.y, test_rows);
  const Eigen::VectorXd pred = predict(model, gather_rows(dataset.X, test_rows));
  return metrics_between(truth, pred);
}

std::uint64_t split_seed(std::uint64_t base_seed, const std::string& dataset_name,
                         int run) {
  return derive_seed(base_seed, {fnv1a(dataset_name),
                                 static_cast<std::uint64_t>(run), fnv1a("split")});
}

std::uint64_t strategy_seed(std::uint64_t base_seed, const std::string& dataset_name,
                            StrategyKind kind, int run) {
  return derive_seed(base_seed, {fnv1a(dataset_name),
                                 static_cast<std::uint64_t>(run),
                                 fnv1a(strategy_name(kind))});
}

RunResult evaluate_single_run(const Dataset& dataset, StrategyKind kind, int run,
                              const ExperimentConfig& config) {
  Rng split_rng(split_seed(config.base_seed, dataset.name, run));
  const PoolSplit split = split_pool(dataset.n(), config.train_fraction, split_rng);
  const int budget = compute_budget(split.train.size(), config.budget_fraction,
                                    config.budget_bounds);

  RunResult result;
  result.kind = kind;
  result.run = run;
  result.pool_seed = split_seed(config.base_seed, dataset.name, run);
  result.m_start = static_cast<int>(dataset.dim());

  PoolState state(dataset, split.train,
                  strategy_seed(config.base_seed, dataset.name, kind, run));
  result.query_order = run_strategy(config.strategy_spec(kind), state, budget);

  const int d = result.m_start;
  Eigen::MatrixXd Xl(budget, dataset.dim());
  Eigen::VectorXd yl(budget);
  for (int i = 0; i < budget; ++i) {
    Xl.row(i) = dataset.X.row(result.query_order[static_cast<std::size_t>(i)]);
    yl(i) = dataset.y(result.query_order[static_cast<std::size_t>(i)]);
  }

  std::vector<Eigen::Index> prefix;
  prefix.reserve(static_cast<std::size_t>(budget));
  for (int m = 1; m <= budget; ++m) {
    prefix.push_back(result.query_order[static_cast<std::size_t>(m - 1)]);
    if (m < d) continue;
    const RidgeModel model = fit_ridge(Xl.topRows(m), yl.head(m), config.sigma);
    const MetricPair trans =
        transductive_metrics(dataset, split.train, prefix, model);
    const MetricPair ind = inductive_metrics(dataset, split.test, model);
    result.rmse_t.push_back(trans.rmse);
    result.cc_t.push_back(trans.cc);
    result.cc_t_defined.push_back(trans.cc_defined ? 1 : 0);
    result.rmse_i.push_back(ind.rmse);
    result.cc_i.push_back(ind.cc);
    result.cc_i_defined.push_back(ind.cc_defined ? 1 : 0);
  }
  return result;
}

std::vector<StrategyCurves> aggregate_curves(
    const std::vector<StrategyKind>& strategies,
    const std::vector<std::vector<RunResult>>& runs) {
  std::vector<StrategyCurves> out;
  out.reserve(strategies.size());
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    const auto& strategy_runs = runs[s];
    if (strategy_runs.empty()) {
      throw invalid_argument_error("aggregate_curves: no runs for strategy");
    }
    const std::size_t len = strategy_runs.front().rmse_t.size();
    StrategyCurves curves;
    curves.kind = strategies[s];
    curves.mean_rmse_t.assign(len, 0.0);
    curves.mean_cc_t.assign(len, 0.0);
    curves.mean_rmse_i.assign(len, 0.0);
    curves.mean_cc_i.assign(len, 0.0);
    curves.cc_t_defined_runs.assign(len, 0);
    curves.cc_i_defined_runs.assign(len, 0);

    for (const RunResult& run : strategy_runs) {
      if (run.rmse_t.size() != len) {
        throw invalid_argument_error("aggregate_curves: curve length mismatch");
      }
      for (std::size_t t = 0; t < len; ++t) {
        curves.mean_rmse_t[t] += run.rmse_t[t];
        curves.mean_rmse_i[t] += run.rmse_i[t];
        if (run.cc_t_defined[t]) {
          curves.mean_cc_t[t] += run.cc_t[t];
          ++curves.cc_t_defined_runs[t];
        }
        if (run.cc_i_defined[t]) {
          curves.mean_cc_i[t] += run.cc_i[t];
          ++curves.cc_i_defined_runs[t];
        }
      }
    }
    const auto n_runs = static_cast<double>(strategy_runs.size());
    for (std::size_t t = 0; t < len; ++t) {
      curves.mean_rmse_t[t] /= n_runs;
      curves.mean_rmse_i[t] /= n_runs;
      curves.mean_cc_t[t] = curves.cc_t_defined_runs[t] > 0
                                ? curves.mean_cc_t[t] / curves.cc_t_defined_runs[t]
                                : std::numeric_limits<double>::quiet_NaN();
      curves.mean_cc_i[t] = curves.cc_i_defined_runs[t] > 0
                                ? curves.mean_cc_i[t] / curves.cc_i_defined_runs[t]
                                : std::numeric_limits<double>::quiet_NaN();
    }
    curves.auc_rmse_t = compute_auc(curves.mean_rmse_t);
    curves.auc_cc_t = compute_auc(curves.mean_cc_t);
    curves.auc_rmse_i = compute_auc(curves.mean_rmse_i);
    curves.auc_cc_i = compute_auc(curves.mean_cc_i);
    out.push_back(std::move(curves));
  }
  return out;
}

DatasetResults run_experiment(const Dataset& dataset,
                              const std::vector<StrategyKind>& strategies,
                              const ExperimentConfig& config, int jobs) {
  config.validate();
  if (strategies.empty()) throw config_error("no strategies requested");
  if (jobs < 1) throw invalid_argument_error("run_experiment: jobs must be >= 1");

  DatasetResults results;
  results.dataset = dataset.name;
  results.n = dataset.n();
  results.dim = dataset.dim();
  results.pool_size = static_cast<std::size_t>(
      std::floor(config.train_fraction * static_cast<double>(dataset.n())));
  results.m_start = static_cast<int>(dataset.dim());
  results.strategies = strategies;
  results.runs.assign(strategies.size(), std::vector<RunResult>());
  for (auto& r : results.runs) r.resize(static_cast<std::size_t>(config.runs));

  struct Task {
    std::size_t strategy;
    int run;
  };
  std::vector<Task> tasks;
  tasks.reserve(strategies.size() * static_cast<std::size_t>(config.runs));
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    for (int r = 0; r < config.runs; ++r) tasks.push_back({s, r});
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      try {
        const Task& task = tasks[i];
        results.runs[task.strategy][static_cast<std::size_t>(task.run)] =
            evaluate_single_run(dataset, strategies[task.strategy], task.run,
                                config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  results.budget = results.m_start +
                   static_cast<int>(results.runs.front().front().rmse_t.size()) - 1;
  results.curves = aggregate_curves(strategies, results.runs);
  return results;
}

double compute_auc(const std::vector<double>& mean_curve) {
  if (mean_curve.size() < 2) {
    throw invalid_argument_error("compute_auc: curve needs at least 2 points");
  }
  double auc = 0.0;
  for (std::size_t i = 0; i + 1 < mean_curve.size(); ++i) {
    auc += 0.5 * (mean_curve[i] + mean_curve[i + 1]);
  }
  return auc;
}

namespace {

// Average-rank assignment; direction decides whether small or large values
// are good. NaN ranks after everything else.
Eigen::VectorXd rank_row(const Eigen::VectorXd& values, bool smaller_is_better) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto key = [&](Eigen::Index i) {
    const double v = values(i);
    if (std::isnan(v)) return std::numeric_limits<double>::infinity();
    return smaller_is_better ? v : -v;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return key(a) < key(b); });

  Eigen::VectorXd ranks(n);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && key(order[j + 1]) == key(order[i])) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks(order[t]) = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

RankTable normalize_and_rank(const std::vector<std::string>& datasets,
                             const std::vector<StrategyKind>& strategies,
                             const Eigen::MatrixXd& auc, bool smaller_is_better) {
  const auto n_datasets = static_cast<Eigen::Index>(datasets.size());
  const auto n_strategies = static_cast<Eigen::Index>(strategies.size());
  if (auc.rows() != n_datasets || auc.cols() != n_strategies) {
    throw invalid_argument_error("normalize_and_rank: AUC shape mismatch");
  }
  Eigen::Index bl = -1;
  for (Eigen::Index s = 0; s < n_strategies; ++s) {
    if (strategies[static_cast<std::size_t>(s)] == StrategyKind::BL) bl = s;
  }
  if (bl < 0) throw invalid_argument_error("normalize_and_rank: BL column required");

  RankTable table;
  table.datasets = datasets;
  table.strategies = strategies;
  table.auc = auc;
  table.normalized.resize(n_datasets, n_strategies);
  table.ranks.resize(n_datasets, n_strategies);
  for (Eigen::Index r = 0; r < n_datasets; ++r) {
    const double anchor = auc(r, bl);
    if (anchor == 0.0) {
      throw numeric_error("normalize_and_rank: BL AUC is zero for dataset " +
                          datasets[static_cast<std::size_t>(r)]);
    }
    table.normalized.row(r) = auc.row(r) / anchor;
    table.ranks.row(r) = rank_row(auc.row(r), smaller_is_better).transpose();
  }
  table.average_rank = table.ranks.colwise().mean();
  return table;
}

Eigen::MatrixXd project_pca2(const Eigen::Ref<const Eigen::MatrixXd>& X,
                             bool* rank_deficient) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (d < 2) throw invalid_argument_error("project_pca2: need at least 2 features");
  if (n < 3) throw invalid_argument_error("project_pca2: need at least 3 samples");

  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - mean;
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw numeric_error("project_pca2: eigendecomposition failed");
  }

  // Eigenvalues come out ascending; take the top two.
  Eigen::MatrixXd components(d, 2);
  components.col(0) = solver.eigenvectors().col(d - 1);
  components.col(1) = solver.eigenvectors().col(d - 2);
  for (int c = 0; c < 2; ++c) {
    Eigen::Index max_row = 0;
    components.col(c).cwiseAbs().maxCoeff(&max_row);
    if (components(max_row, c) < 0.0) components.col(c) = -components.col(c);
  }

  Eigen::MatrixXd projected = centered * components;
  const double lambda1 = solver.eigenvalues()(d - 1);
  const double lambda2 = solver.eigenvalues()(d - 2);
  const bool deficient = lambda2 <= lambda1 * 1e-12;
  if (deficient) projected.col(1).setZero();
  if (rank_deficient) *rank_deficient = deficient;
  return projected;
}

}  // namespace alr
