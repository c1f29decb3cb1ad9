// Benchmark harness front end: run | bench | viz | stats.
#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "alr/config.hpp"
#include "alr/error.hpp"
#include "alr/evaluation.hpp"
#include "alr/reporting.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> datasets;
  std::vector<std::string> strategies;
};

void add_common(CLI::App* sub, CommonArgs* args) {
  sub->add_option("-c,--config", args->config_path, "experiment config (JSON)")
      ->required();
  const char* env = std::getenv("ALR_OUT_DIR");
  args->out_dir = env ? env : "out";
  sub->add_option("-o,--out", args->out_dir,
                  "output directory (default $ALR_OUT_DIR or ./out)");
  sub->add_option("-j,--jobs", args->jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", args->seed, "override the experiment seed");
  sub->add_option("--datasets", args->datasets,
                  "restrict to these registered datasets")
      ->delimiter(',');
  sub->add_option("--strategies", args->strategies,
                  "restrict to these strategies")
      ->delimiter(',');
}

alr::BenchConfig prepare_config(const CommonArgs& args) {
  alr::BenchConfig config = alr::load_config(args.config_path);
  if (args.seed) config.experiment.base_seed = *args.seed;

  if (!args.datasets.empty()) {
    std::vector<alr::DatasetEntry> kept;
    for (const std::string& name : args.datasets) {
      bool found = false;
      for (const auto& entry : config.datasets) {
        if (entry.name == name) {
          kept.push_back(entry);
          found = true;
          break;
        }
      }
      if (!found)
        throw alr::config_error("dataset filter names unregistered dataset '" +
                                name + "'");
    }
    config.datasets = std::move(kept);
  }

  if (!args.strategies.empty()) {
    std::vector<alr::StrategyKind> kept;
    for (const std::string& name : args.strategies) {
      const auto kind = alr::parse_strategy_name(name);
      if (!kind) throw alr::config_error("unknown strategy '" + name + "'");
      bool declared = false;
      for (alr::StrategyKind k : config.strategies) declared |= (k == *kind);
      if (!declared)
        throw alr::config_error("strategy filter names undeclared strategy '" +
                                name + "'");
      kept.push_back(*kind);
    }
    config.strategies = std::move(kept);
  }
  return config;
}

void progress_to_stderr(const std::string& line) { std::cerr << line << '\n'; }

int cmd_bench(const CommonArgs& args) {
  const alr::BenchConfig config = prepare_config(args);
  alr::run_bench(config, args.out_dir, args.jobs, progress_to_stderr);
  std::cerr << "artifacts written to " << args.out_dir << '\n';
  return 0;
}

int cmd_run(const CommonArgs& args, const std::string& dataset) {
  CommonArgs single = args;
  if (!dataset.empty()) single.datasets = {dataset};
  alr::BenchConfig config = prepare_config(single);
  if (config.datasets.size() != 1)
    throw alr::config_error(
        "run works on one dataset; pass --dataset (registry has " +
        std::to_string(config.datasets.size()) + ")");
  alr::run_bench(config, args.out_dir, args.jobs, progress_to_stderr);
  std::cerr << "artifacts written to " << args.out_dir << '\n';
  return 0;
}

int cmd_stats(const CommonArgs& args, const std::string& granularity,
              double alpha) {
  alr::BenchConfig config = prepare_config(args);
  if (!granularity.empty()) {
    if (granularity == "dataset")
      config.stats.granularity = alr::StatsGranularity::per_dataset;
    else if (granularity == "run")
      config.stats.granularity = alr::StatsGranularity::per_run;
    else
      throw alr::config_error("granularity must be 'dataset' or 'run'");
  }
  if (alpha > 0.0) config.stats.alpha = alpha;

  const alr::BenchOutputs outputs = alr::collect_bench(config, args.out_dir);
  alr::write_artifacts(args.out_dir, config, outputs);
  std::cerr << "stats refreshed in " << args.out_dir << '\n';
  return 0;
}

int cmd_viz(const CommonArgs& args, const std::string& dataset,
            const std::string& strategy, int run, int step) {
  CommonArgs single = args;
  if (!dataset.empty()) single.datasets = {dataset};
  alr::BenchConfig config = prepare_config(single);
  if (config.datasets.size() != 1)
    throw alr::config_error(
        "viz works on one dataset; pass --dataset (registry has " +
        std::to_string(config.datasets.size()) + ")");

  const auto kind = alr::parse_strategy_name(strategy);
  if (!kind) throw alr::config_error("unknown strategy '" + strategy + "'");
  if (run < 0 || run >= config.experiment.runs)
    throw alr::config_error("run index out of range");

  const alr::Dataset ds = alr::load_registered_dataset(config.datasets.front());
  const alr::RunResult result =
      alr::evaluate_single_run(ds, *kind, run, config.experiment);

  alr::Rng rng(result.pool_seed);
  const alr::PoolSplit split =
      alr::split_pool(ds.n(), config.experiment.train_fraction, rng);

  const int upto = step > 0 ? step : static_cast<int>(result.query_order.size());
  fs::create_directories(args.out_dir);
  const fs::path path =
      fs::path(args.out_dir) / ("pca_" + ds.name + "_" + alr::strategy_name(*kind) +
                                "_run" + std::to_string(run) + "_step" +
                                std::to_string(upto) + ".csv");
  alr::write_pca_csv(path, ds, split.train, result.query_order, upto);
  std::cerr << "wrote " << path.string() << '\n';
  return 0;
}

int exit_code_for(const alr::Error& e) {
  if (e.category() == "io") return 2;
  if (e.category() == "parse") return 3;
  if (e.category() == "config") return 4;
  if (e.category() == "numeric") return 5;
  return 6;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pool-based active learning for regression: benchmark harness"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string dataset;
  std::string strategy;
  std::string granularity;
  double alpha = 0.0;
  int run = 0;
  int step = 0;

  CLI::App* run_cmd = app.add_subcommand("run", "one dataset end to end");
  add_common(run_cmd, &args);
  run_cmd->add_option("--dataset", dataset, "registered dataset name");

  CLI::App* bench_cmd =
      app.add_subcommand("bench", "full sweep, resumable per-run files");
  add_common(bench_cmd, &args);

  CLI::App* stats_cmd =
      app.add_subcommand("stats", "recompute tests over a finished bench");
  add_common(stats_cmd, &args);
  stats_cmd->add_option("--granularity", granularity,
                        "observation granularity: dataset|run");
  stats_cmd->add_option("--alpha", alpha, "significance level");

  CLI::App* viz_cmd = app.add_subcommand("viz", "PCA export of one run");
  add_common(viz_cmd, &args);
  viz_cmd->add_option("--dataset", dataset, "registered dataset name");
  viz_cmd->add_option("--strategy", strategy, "strategy to trace")->required();
  viz_cmd->add_option("--run", run, "run index");
  viz_cmd->add_option("--step", step, "selection step (default: full budget)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(args, dataset);
    if (bench_cmd->parsed()) return cmd_bench(args);
    if (stats_cmd->parsed()) return cmd_stats(args, granularity, alpha);
    if (viz_cmd->parsed()) return cmd_viz(args, dataset, strategy, run, step);
  } catch (const alr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
