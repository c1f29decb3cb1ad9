#include "alr/reporting.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "alr/error.hpp"
#include "alr/rng.hpp"

namespace alr {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  return out;
}

std::string pad_run(int run) {
  std::string s = std::to_string(run);
  while (s.size() < 5) s.insert(s.begin(), '0');
  return s;
}

const std::vector<double>& run_curve(const RunResult& r, MetricId id) {
  switch (id) {
    case MetricId::rmse_t: return r.rmse_t;
    case MetricId::cc_t: return r.cc_t;
    case MetricId::rmse_i: return r.rmse_i;
    case MetricId::cc_i: return r.cc_i;
  }
  throw invalid_argument_error("unknown metric id");
}

const std::vector<std::uint8_t>* run_curve_defined(const RunResult& r,
                                                   MetricId id) {
  switch (id) {
    case MetricId::cc_t: return &r.cc_t_defined;
    case MetricId::cc_i: return &r.cc_i_defined;
    default: return nullptr;  // RMSE is always defined
  }
}

double curves_auc(const StrategyCurves& c, MetricId id) {
  switch (id) {
    case MetricId::rmse_t: return c.auc_rmse_t;
    case MetricId::cc_t: return c.auc_cc_t;
    case MetricId::rmse_i: return c.auc_rmse_i;
    case MetricId::cc_i: return c.auc_cc_i;
  }
  throw invalid_argument_error("unknown metric id");
}

// Per-run AUC; NaN when any curve point is undefined.
double run_auc(const RunResult& r, MetricId id) {
  if (const auto* defined = run_curve_defined(r, id)) {
    for (std::uint8_t d : *defined) {
      if (!d) return std::numeric_limits<double>::quiet_NaN();
    }
  }
  return compute_auc(run_curve(r, id));
}

json doubles_to_json(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

std::vector<double> doubles_from_json(const json& j, const std::string& what,
                                      const fs::path& path) {
  if (!j.is_array())
    throw parse_error("run file " + path.string() + ": " + what + " not an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number())
      throw parse_error("run file " + path.string() + ": " + what +
                        " holds a non-number");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::uint8_t> flags_from_json(const json& j, const std::string& what,
                                          const fs::path& path) {
  if (!j.is_array())
    throw parse_error("run file " + path.string() + ": " + what + " not an array");
  std::vector<std::uint8_t> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(x.get<int>() ? 1 : 0);
  return out;
}

}  // namespace

const std::vector<MetricId>& all_metric_ids() {
  static const std::vector<MetricId> ids = {MetricId::rmse_t, MetricId::cc_t,
                                            MetricId::rmse_i, MetricId::cc_i};
  return ids;
}

std::string metric_name(MetricId id) {
  switch (id) {
    case MetricId::rmse_t: return "rmse_t";
    case MetricId::cc_t: return "cc_t";
    case MetricId::rmse_i: return "rmse_i";
    case MetricId::cc_i: return "cc_i";
  }
  throw invalid_argument_error("unknown metric id");
}

bool metric_smaller_is_better(MetricId id) {
  return id == MetricId::rmse_t || id == MetricId::rmse_i;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

std::uint64_t config_fingerprint(const ExperimentConfig& config,
                                 const Dataset& dataset) {
  std::string canon = dataset.name;
  canon += '|';
  canon += std::to_string(dataset.n()) + "x" + std::to_string(dataset.dim());
  for (double v : {config.train_fraction, config.budget_fraction, config.sigma,
                   config.ebmalr_gamma})
    canon += '|' + format_double(v);
  for (int v : {config.budget_bounds.min, config.budget_bounds.max,
                config.committee_size, config.kmeans.restarts,
                config.kmeans.max_iter})
    canon += '|' + std::to_string(v);
  canon += '|' + std::to_string(config.base_seed);

  std::uint64_t h = fnv1a(canon);
  // Fold in the feature matrix and targets so stale files are caught when
  // the CSV behind a dataset name changes.
  for (Eigen::Index i = 0; i < dataset.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < dataset.X.cols(); ++j)
      h = splitmix64(h ^ fnv1a(format_double(dataset.X(i, j))));
    h = splitmix64(h ^ fnv1a(format_double(dataset.y(i))));
  }
  return h;
}

fs::path run_file_path(const fs::path& out_dir, const std::string& dataset,
                       StrategyKind kind, int run) {
  return out_dir / "runs" / dataset /
         (strategy_name(kind) + "_" + pad_run(run) + ".json");
}

void save_run_result(const fs::path& path, const RunResult& result,
                     const std::string& dataset, std::uint64_t fingerprint) {
  ordered_json j;
  j["dataset"] = dataset;
  j["strategy"] = strategy_name(result.kind);
  j["run"] = result.run;
  j["fingerprint"] = fingerprint;
  j["pool_seed"] = result.pool_seed;
  j["m_start"] = result.m_start;
  json order = json::array();
  for (Eigen::Index q : result.query_order) order.push_back(static_cast<long long>(q));
  j["query_order"] = std::move(order);
  j["rmse_t"] = doubles_to_json(result.rmse_t);
  j["cc_t"] = doubles_to_json(result.cc_t);
  j["cc_t_defined"] = result.cc_t_defined;
  j["rmse_i"] = doubles_to_json(result.rmse_i);
  j["cc_i"] = doubles_to_json(result.cc_i);
  j["cc_i_defined"] = result.cc_i_defined;

  auto out = open_out(path);
  out << j.dump() << '\n';
  if (!out) throw io_error("failed writing " + path.string());
}

RunResult load_run_result(const fs::path& path, const std::string& dataset,
                          StrategyKind kind, int run, std::uint64_t fingerprint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open run file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error("run file " + path.string() + ": " + e.what());
  }

  const auto stale = [&](const std::string& why) {
    return config_error("run file " + path.string() + " does not match the " +
                        "current configuration (" + why +
                        "); delete the output directory to recompute");
  };
  if (j.value("dataset", std::string()) != dataset) throw stale("dataset name");
  if (j.value("strategy", std::string()) != strategy_name(kind))
    throw stale("strategy");
  if (j.value("run", -1) != run) throw stale("run index");
  if (j.value("fingerprint", std::uint64_t{0}) != fingerprint)
    throw stale("config/data fingerprint");

  RunResult r;
  r.kind = kind;
  r.run = run;
  r.pool_seed = j.at("pool_seed").get<std::uint64_t>();
  r.m_start = j.at("m_start").get<int>();
  for (const auto& q : j.at("query_order"))
    r.query_order.push_back(static_cast<Eigen::Index>(q.get<long long>()));
  r.rmse_t = doubles_from_json(j.at("rmse_t"), "rmse_t", path);
  r.cc_t = doubles_from_json(j.at("cc_t"), "cc_t", path);
  r.cc_t_defined = flags_from_json(j.at("cc_t_defined"), "cc_t_defined", path);
  r.rmse_i = doubles_from_json(j.at("rmse_i"), "rmse_i", path);
  r.cc_i = doubles_from_json(j.at("cc_i"), "cc_i", path);
  r.cc_i_defined = flags_from_json(j.at("cc_i_defined"), "cc_i_defined", path);

  const std::size_t len = r.rmse_t.size();
  if (len == 0 || r.cc_t.size() != len || r.cc_t_defined.size() != len ||
      r.rmse_i.size() != len || r.cc_i.size() != len || r.cc_i_defined.size() != len)
    throw parse_error("run file " + path.string() + ": inconsistent curve lengths");
  return r;
}

void write_curves_csv(const fs::path& path,
                      const std::vector<DatasetResults>& results) {
  auto out = open_out(path);
  out << "dataset,strategy,run,m,rmse_t,cc_t,rmse_i,cc_i\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& ds : results) {
    for (std::size_t s = 0; s < ds.strategies.size(); ++s) {
      const std::string name = strategy_name(ds.strategies[s]);
      for (const auto& run : ds.runs[s]) {
        for (std::size_t t = 0; t < run.rmse_t.size(); ++t) {
          const double cc_t = run.cc_t_defined[t] ? run.cc_t[t] : nan;
          const double cc_i = run.cc_i_defined[t] ? run.cc_i[t] : nan;
          out << ds.dataset << ',' << name << ',' << run.run << ','
              << run.m_start + static_cast<int>(t) << ','
              << format_double(run.rmse_t[t]) << ',' << format_double(cc_t) << ','
              << format_double(run.rmse_i[t]) << ',' << format_double(cc_i)
              << '\n';
        }
      }
    }
  }
  if (!out) throw io_error("failed writing " + path.string());
}

void write_mean_curves_csv(const fs::path& path,
                           const std::vector<DatasetResults>& results) {
  auto out = open_out(path);
  out << "dataset,strategy,m,rmse_t,cc_t,cc_t_runs,rmse_i,cc_i,cc_i_runs\n";
  for (const auto& ds : results) {
    for (std::size_t s = 0; s < ds.strategies.size(); ++s) {
      const auto& c = ds.curves[s];
      const std::string name = strategy_name(ds.strategies[s]);
      for (std::size_t t = 0; t < c.mean_rmse_t.size(); ++t) {
        out << ds.dataset << ',' << name << ','
            << ds.m_start + static_cast<int>(t) << ','
            << format_double(c.mean_rmse_t[t]) << ','
            << format_double(c.mean_cc_t[t]) << ',' << c.cc_t_defined_runs[t]
            << ',' << format_double(c.mean_rmse_i[t]) << ','
            << format_double(c.mean_cc_i[t]) << ',' << c.cc_i_defined_runs[t]
            << '\n';
      }
    }
  }
  if (!out) throw io_error("failed writing " + path.string());
}

void write_ranks_csv(const fs::path& path, const RankTable& table) {
  auto out = open_out(path);
  out << "dataset";
  for (StrategyKind k : table.strategies) out << ',' << strategy_name(k);
  out << '\n';
  for (std::size_t d = 0; d < table.datasets.size(); ++d) {
    out << table.datasets[d];
    for (Eigen::Index s = 0; s < table.ranks.cols(); ++s)
      out << ',' << format_double(table.ranks(static_cast<Eigen::Index>(d), s));
    out << '\n';
  }
  out << "average";
  for (Eigen::Index s = 0; s < table.average_rank.size(); ++s)
    out << ',' << format_double(table.average_rank(s));
  out << '\n';
  if (!out) throw io_error("failed writing " + path.string());
}

void write_pvalues_csv(const fs::path& path, const ComparisonReport& report) {
  const std::size_t t = report.group_names.size();
  if (t < 2) throw invalid_argument_error("write_pvalues_csv: need >= 2 groups");
  auto out = open_out(path);
  out << "strategy";
  for (std::size_t j = 0; j + 1 < t; ++j) out << ',' << report.group_names[j];
  out << '\n';
  // report.pairs is lower-triangle row-major: (1,0), (2,0), (2,1), ...
  std::size_t idx = 0;
  for (std::size_t i = 1; i < t; ++i) {
    out << report.group_names[i];
    for (std::size_t j = 0; j < i; ++j, ++idx)
      out << ',' << format_fixed(report.adjusted_p[idx], 4);
    out << '\n';
  }
  if (!out) throw io_error("failed writing " + path.string());
}

void write_pca_csv(const fs::path& path, const Dataset& dataset,
                   const std::vector<Eigen::Index>& pool_rows,
                   const std::vector<Eigen::Index>& query_order, int upto) {
  if (upto < 1 || static_cast<std::size_t>(upto) > query_order.size())
    throw invalid_argument_error("pca export: step must lie in [1, " +
                                 std::to_string(query_order.size()) + "]");
  const Eigen::MatrixXd proj = project_pca2(dataset.X);

  std::unordered_map<Eigen::Index, int> step_of;
  for (int q = 0; q < upto; ++q) step_of[query_order[static_cast<std::size_t>(q)]] = q + 1;

  std::set<Eigen::Index> pool(pool_rows.begin(), pool_rows.end());
  for (const auto& [row, step] : step_of) {
    if (!pool.count(row))
      throw invalid_argument_error("pca export: query order leaves the pool");
  }

  auto out = open_out(path);
  out << "index,pc1,pc2,selected,step\n";
  for (Eigen::Index r : pool_rows) {
    const auto it = step_of.find(r);
    const int step = it == step_of.end() ? 0 : it->second;
    out << r << ',' << format_double(proj(r, 0)) << ','
        << format_double(proj(r, 1)) << ',' << (step > 0 ? 1 : 0) << ',' << step
        << '\n';
  }
  if (!out) throw io_error("failed writing " + path.string());
}

MetricReport build_metric_report(const std::vector<DatasetResults>& results,
                                 MetricId metric, const StatsOptions& options) {
  if (results.empty()) throw invalid_argument_error("no dataset results");
  const std::vector<StrategyKind>& strategies = results.front().strategies;
  for (const auto& ds : results) {
    if (ds.strategies != strategies)
      throw invalid_argument_error("datasets ran different strategy sets");
  }

  MetricReport report;
  report.metric = metric;

  const auto n_ds = static_cast<Eigen::Index>(results.size());
  const auto n_s = static_cast<Eigen::Index>(strategies.size());
  Eigen::MatrixXd auc(n_ds, n_s);
  std::vector<std::string> names;
  for (Eigen::Index d = 0; d < n_ds; ++d) {
    names.push_back(results[static_cast<std::size_t>(d)].dataset);
    for (Eigen::Index s = 0; s < n_s; ++s)
      auc(d, s) = curves_auc(
          results[static_cast<std::size_t>(d)].curves[static_cast<std::size_t>(s)],
          metric);
  }
  report.table = normalize_and_rank(names, strategies, auc,
                                    metric_smaller_is_better(metric));

  // Observations for Dunn's test.
  std::vector<std::vector<double>> groups(strategies.size());
  if (options.granularity == StatsGranularity::per_dataset) {
    for (Eigen::Index s = 0; s < n_s; ++s) {
      for (Eigen::Index d = 0; d < n_ds; ++d) {
        const double v = report.table.normalized(d, s);
        if (std::isfinite(v)) groups[static_cast<std::size_t>(s)].push_back(v);
      }
    }
  } else {
    std::size_t bl = strategies.size();
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      if (strategies[s] == StrategyKind::BL) bl = s;
    }
    if (bl == strategies.size())
      throw invalid_argument_error("per-run stats need the BL strategy present");
    for (const auto& ds : results) {
      for (std::size_t r = 0; r < ds.runs[bl].size(); ++r) {
        const double anchor = run_auc(ds.runs[bl][r], metric);
        if (!std::isfinite(anchor) || anchor == 0.0) continue;
        for (std::size_t s = 0; s < strategies.size(); ++s) {
          const double v = run_auc(ds.runs[s][r], metric);
          if (std::isfinite(v)) groups[s].push_back(v / anchor);
        }
      }
    }
  }

  std::vector<std::string> group_names;
  for (StrategyKind k : strategies) group_names.push_back(strategy_name(k));
  try {
    report.comparison = compare_groups(group_names, groups, options.alpha);
    report.comparison_valid = true;
  } catch (const Error& e) {
    report.comparison_valid = false;
    report.comparison_error = e.what();
  }
  return report;
}

nlohmann::ordered_json summary_to_json(const BenchConfig& config,
                                       const std::vector<DatasetResults>& results,
                                       const std::vector<MetricReport>& reports) {
  ordered_json j;

  ordered_json exp;
  exp["runs"] = config.experiment.runs;
  exp["train_fraction"] = config.experiment.train_fraction;
  exp["budget_fraction"] = config.experiment.budget_fraction;
  exp["budget_min"] = config.experiment.budget_bounds.min;
  exp["budget_max"] = config.experiment.budget_bounds.max;
  exp["sigma"] = config.experiment.sigma;
  exp["committee_size"] = config.experiment.committee_size;
  exp["ebmalr_gamma"] = config.experiment.ebmalr_gamma;
  exp["kmeans_restarts"] = config.experiment.kmeans.restarts;
  exp["kmeans_max_iter"] = config.experiment.kmeans.max_iter;
  exp["seed"] = config.experiment.base_seed;
  j["experiment"] = std::move(exp);

  ordered_json strategies = ordered_json::array();
  for (StrategyKind k : config.strategies) strategies.push_back(strategy_name(k));
  j["strategies"] = std::move(strategies);

  ordered_json datasets = ordered_json::array();
  for (const auto& ds : results) {
    ordered_json d;
    d["name"] = ds.dataset;
    d["n"] = static_cast<long long>(ds.n);
    d["d"] = static_cast<long long>(ds.dim);
    d["pool"] = ds.pool_size;
    d["m_start"] = ds.m_start;
    d["budget"] = ds.budget;
    datasets.push_back(std::move(d));
  }
  j["datasets"] = std::move(datasets);

  ordered_json undefined;
  for (const auto& ds : results) {
    ordered_json per_strategy;
    for (std::size_t s = 0; s < ds.strategies.size(); ++s) {
      long long t_count = 0, i_count = 0;
      for (const auto& run : ds.runs[s]) {
        for (std::uint8_t f : run.cc_t_defined) t_count += f ? 0 : 1;
        for (std::uint8_t f : run.cc_i_defined) i_count += f ? 0 : 1;
      }
      ordered_json counts;
      counts["transductive"] = t_count;
      counts["inductive"] = i_count;
      per_strategy[strategy_name(ds.strategies[s])] = std::move(counts);
    }
    undefined[ds.dataset] = std::move(per_strategy);
  }
  j["cc_undefined_points"] = std::move(undefined);

  ordered_json metrics;
  for (const auto& report : reports) {
    ordered_json m;
    m["smaller_is_better"] = metric_smaller_is_better(report.metric);

    ordered_json auc, normalized, ranks;
    const auto& table = report.table;
    for (std::size_t d = 0; d < table.datasets.size(); ++d) {
      ordered_json row_auc, row_norm, row_rank;
      for (std::size_t s = 0; s < table.strategies.size(); ++s) {
        const std::string name = strategy_name(table.strategies[s]);
        const auto di = static_cast<Eigen::Index>(d);
        const auto si = static_cast<Eigen::Index>(s);
        row_auc[name] = table.auc(di, si);
        row_norm[name] = table.normalized(di, si);
        row_rank[name] = table.ranks(di, si);
      }
      auc[table.datasets[d]] = std::move(row_auc);
      normalized[table.datasets[d]] = std::move(row_norm);
      ranks[table.datasets[d]] = std::move(row_rank);
    }
    m["auc"] = std::move(auc);
    m["normalized_auc"] = std::move(normalized);
    m["ranks"] = std::move(ranks);

    ordered_json avg;
    for (std::size_t s = 0; s < table.strategies.size(); ++s)
      avg[strategy_name(table.strategies[s])] =
          table.average_rank(static_cast<Eigen::Index>(s));
    m["average_rank"] = std::move(avg);

    if (report.comparison_valid) {
      ordered_json cmp;
      cmp["alpha"] = report.comparison.alpha;
      cmp["granularity"] =
          config.stats.granularity == StatsGranularity::per_run ? "run" : "dataset";
      ordered_json pairs = ordered_json::array();
      for (std::size_t p = 0; p < report.comparison.pairs.size(); ++p) {
        ordered_json pair;
        pair["a"] = report.comparison.group_names[static_cast<std::size_t>(
            report.comparison.pairs[p].first)];
        pair["b"] = report.comparison.group_names[static_cast<std::size_t>(
            report.comparison.pairs[p].second)];
        pair["raw_p"] = report.comparison.raw_p[p];
        pair["adjusted_p"] = report.comparison.adjusted_p[p];
        pair["significant"] = static_cast<bool>(report.comparison.significant[p]);
        pairs.push_back(std::move(pair));
      }
      cmp["pairs"] = std::move(pairs);
      m["comparison"] = std::move(cmp);
    } else {
      ordered_json cmp;
      cmp["error"] = report.comparison_error;
      m["comparison"] = std::move(cmp);
    }
    metrics[metric_name(report.metric)] = std::move(m);
  }
  j["metrics"] = std::move(metrics);
  return j;
}

void write_artifacts(const fs::path& out_dir, const BenchConfig& config,
                     const BenchOutputs& outputs) {
  fs::create_directories(out_dir);
  write_curves_csv(out_dir / "curves.csv", outputs.results);
  write_mean_curves_csv(out_dir / "mean_curves.csv", outputs.results);
  for (const auto& report : outputs.reports) {
    const std::string name = metric_name(report.metric);
    write_ranks_csv(out_dir / ("ranks_" + name + ".csv"), report.table);
    if (report.comparison_valid)
      write_pvalues_csv(out_dir / ("pvalues_" + name + ".csv"), report.comparison);
  }
  auto out = open_out(out_dir / "summary.json");
  out << summary_to_json(config, outputs.results, outputs.reports).dump(2) << '\n';
  if (!out) throw io_error("failed writing summary.json");
}

namespace {

// Shared by run_bench/collect_bench: load what is cached, optionally compute
// and persist the rest.
DatasetResults assemble_dataset(const BenchConfig& config,
                                const DatasetEntry& entry,
                                const fs::path& out_dir, int jobs,
                                bool allow_compute, const ProgressFn& progress) {
  const Dataset dataset = load_registered_dataset(entry);
  const ExperimentConfig& exp = config.experiment;
  const std::uint64_t fingerprint = config_fingerprint(exp, dataset);

  DatasetResults results;
  results.dataset = dataset.name;
  results.n = dataset.n();
  results.dim = dataset.dim();
  results.pool_size = static_cast<std::size_t>(
      std::floor(exp.train_fraction * static_cast<double>(dataset.n())));
  results.m_start = static_cast<int>(dataset.dim());
  results.budget =
      compute_budget(results.pool_size, exp.budget_fraction, exp.budget_bounds);
  results.strategies = config.strategies;
  results.runs.assign(config.strategies.size(), std::vector<RunResult>());
  for (auto& r : results.runs) r.resize(static_cast<std::size_t>(exp.runs));

  struct Task {
    std::size_t strategy;
    int run;
  };
  std::vector<Task> missing;
  std::size_t cached = 0;
  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    for (int r = 0; r < exp.runs; ++r) {
      const fs::path path =
          run_file_path(out_dir, dataset.name, config.strategies[s], r);
      if (fs::exists(path)) {
        RunResult loaded = load_run_result(path, dataset.name,
                                           config.strategies[s], r, fingerprint);
        const auto expected_len =
            static_cast<std::size_t>(results.budget - results.m_start + 1);
        if (loaded.m_start != results.m_start || loaded.rmse_t.size() != expected_len)
          throw config_error("run file " + path.string() +
                             " has mismatched curve shape; delete the output "
                             "directory to recompute");
        results.runs[s][static_cast<std::size_t>(r)] = std::move(loaded);
        ++cached;
      } else {
        missing.push_back({s, r});
      }
    }
  }

  if (!missing.empty() && !allow_compute)
    throw io_error("missing run file: " +
                   run_file_path(out_dir, dataset.name,
                                 config.strategies[missing.front().strategy],
                                 missing.front().run)
                       .string() +
                   " (run the bench first)");

  if (progress)
    progress(dataset.name + ": " + std::to_string(cached) + " cached, " +
             std::to_string(missing.size()) + " to compute");

  if (!missing.empty()) {
    fs::create_directories(out_dir / "runs" / dataset.name);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= missing.size()) break;
        try {
          const Task& task = missing[i];
          results.runs[task.strategy][static_cast<std::size_t>(task.run)] =
              evaluate_single_run(dataset, config.strategies[task.strategy],
                                  task.run, exp);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    if (jobs <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(jobs));
      for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Single writer, fixed order.
    for (const Task& task : missing) {
      save_run_result(
          run_file_path(out_dir, dataset.name, config.strategies[task.strategy],
                        task.run),
          results.runs[task.strategy][static_cast<std::size_t>(task.run)],
          dataset.name, fingerprint);
    }
  }

  results.curves = aggregate_curves(config.strategies, results.runs);
  return results;
}

BenchOutputs assemble_all(const BenchConfig& config, const fs::path& out_dir,
                          int jobs, bool allow_compute,
                          const ProgressFn& progress) {
  config.experiment.validate();
  if (config.strategies.empty()) throw config_error("no strategies requested");
  if (config.datasets.empty()) throw config_error("no datasets registered");

  BenchOutputs out;
  for (const auto& entry : config.datasets) {
    out.results.push_back(
        assemble_dataset(config, entry, out_dir, jobs, allow_compute, progress));
    if (progress) progress(entry.name + ": done");
  }
  for (MetricId metric : all_metric_ids())
    out.reports.push_back(build_metric_report(out.results, metric, config.stats));
  return out;
}

}  // namespace

BenchOutputs run_bench(const BenchConfig& config, const fs::path& out_dir,
                       int jobs, const ProgressFn& progress) {
  if (jobs < 1) throw invalid_argument_error("run_bench: jobs must be >= 1");
  fs::create_directories(out_dir / "runs");
  BenchOutputs out = assemble_all(config, out_dir, jobs, true, progress);
  write_artifacts(out_dir, config, out);
  return out;
}

BenchOutputs collect_bench(const BenchConfig& config, const fs::path& out_dir) {
  return assemble_all(config, out_dir, 1, false, {});
}

}  // namespace alr
