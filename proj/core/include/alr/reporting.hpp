#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "alr/config.hpp"
#include "alr/evaluation.hpp"
#include "alr/stats.hpp"

namespace alr {

// The four learning-curve metrics: transductive/inductive RMSE and CC.
enum class MetricId { rmse_t, cc_t, rmse_i, cc_i };
const std::vector<MetricId>& all_metric_ids();
std::string metric_name(MetricId id);
bool metric_smaller_is_better(MetricId id);

// Shortest round-trip decimal form (to_chars); the one double format used in
// every CSV so reruns are byte-identical.
std::string format_double(double v);
std::string format_fixed(double v, int decimals);

// ---- per-run result files (the resumable store) ----

// Everything that must match for a cached run file to be reusable: the
// dataset (name, shape, contents) plus all protocol knobs except the total
// run count — adding runs keeps existing files valid.
std::uint64_t config_fingerprint(const ExperimentConfig& config,
                                 const Dataset& dataset);

std::filesystem::path run_file_path(const std::filesystem::path& out_dir,
                                    const std::string& dataset, StrategyKind kind,
                                    int run);

void save_run_result(const std::filesystem::path& path, const RunResult& result,
                     const std::string& dataset, std::uint64_t fingerprint);

// Loads and validates a run file; any mismatch (dataset, strategy, run,
// fingerprint) is an error telling the user to clear the output directory.
RunResult load_run_result(const std::filesystem::path& path,
                          const std::string& dataset, StrategyKind kind, int run,
                          std::uint64_t fingerprint);

// ---- artifact writers ----

// Per-run curves: dataset,strategy,run,m,rmse_t,cc_t,rmse_i,cc_i.
// Undefined CC cells are written as nan.
void write_curves_csv(const std::filesystem::path& path,
                      const std::vector<DatasetResults>& results);

// Mean curves with defined-run counts for the CC columns.
void write_mean_curves_csv(const std::filesystem::path& path,
                           const std::vector<DatasetResults>& results);

// Rank table: one row per dataset plus the average row.
void write_ranks_csv(const std::filesystem::path& path, const RankTable& table);

// Lower-triangle adjusted p-values at 4 decimals; row i holds pairs
// (strategy i, strategy j<i).
void write_pvalues_csv(const std::filesystem::path& path,
                       const ComparisonReport& report);

// PCA scatter export for one run: index,pc1,pc2,selected,step over the pool
// rows; `step` is the 1-based selection position of rows picked within the
// first `upto` queries, 0 otherwise.
void write_pca_csv(const std::filesystem::path& path, const Dataset& dataset,
                   const std::vector<Eigen::Index>& pool_rows,
                   const std::vector<Eigen::Index>& query_order, int upto);

// ---- aggregate reports ----

struct MetricReport {
  MetricId metric = MetricId::rmse_t;
  RankTable table;
  ComparisonReport comparison;
  bool comparison_valid = false;
  std::string comparison_error;  // why the comparison is absent
};

// Rank table over all datasets plus Dunn/FDR at the configured granularity.
// per_dataset observations: normalized AUC per dataset. per_run observations:
// per-run AUC divided by the same run's BL AUC, pooled across datasets.
MetricReport build_metric_report(const std::vector<DatasetResults>& results,
                                 MetricId metric, const StatsOptions& options);

nlohmann::ordered_json summary_to_json(const BenchConfig& config,
                                       const std::vector<DatasetResults>& results,
                                       const std::vector<MetricReport>& reports);

// ---- orchestration ----

using ProgressFn = std::function<void(const std::string&)>;

struct BenchOutputs {
  std::vector<DatasetResults> results;
  std::vector<MetricReport> reports;  // one per MetricId
};

// Writes curves.csv, mean_curves.csv, ranks_*.csv, pvalues_*.csv, and
// summary.json under out_dir.
void write_artifacts(const std::filesystem::path& out_dir,
                     const BenchConfig& config, const BenchOutputs& outputs);

// Full sweep: for every dataset and (strategy, run) pair, reuse the per-run
// file if present, otherwise compute (in parallel over `jobs` threads) and
// save it; then write_artifacts. Artifact bytes are independent of jobs and
// of which runs were cached.
BenchOutputs run_bench(const BenchConfig& config,
                       const std::filesystem::path& out_dir, int jobs,
                       const ProgressFn& progress = {});

// Rebuilds aggregate reports from an existing run-file store without
// recomputing anything; errors if any run file is missing. Writes nothing.
BenchOutputs collect_bench(const BenchConfig& config,
                           const std::filesystem::path& out_dir);

}  // namespace alr
