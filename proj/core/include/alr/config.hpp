#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "alr/dataset.hpp"
#include "alr/evaluation.hpp"
#include "alr/strategies.hpp"

namespace alr {

// One dataset registry entry: where the CSV lives and how to read it.
struct DatasetEntry {
  std::string name;
  std::filesystem::path path;
  CsvSchema schema;
};

// Observation granularity for the multiple-comparison test: one observation
// per dataset (normalized AUC) or one per (dataset, run).
enum class StatsGranularity { per_dataset, per_run };

struct StatsOptions {
  double alpha = 0.05;
  StatsGranularity granularity = StatsGranularity::per_dataset;
};

// Full benchmark description: protocol knobs, strategy roster, dataset
// registry, stats options.
struct BenchConfig {
  ExperimentConfig experiment;
  std::vector<StrategyKind> strategies;
  std::vector<DatasetEntry> datasets;
  StatsOptions stats;
};

// Parses a JSON benchmark config. Unknown keys, bad types, out-of-range
// values, unknown strategy names, and missing dataset files are all errors
// naming the offending field. Relative dataset paths resolve against
// base_dir. Defaults: runs=100, train_fraction=0.8, budget 10% in [20,60],
// sigma=0.01, committee_size=4, ebmalr_gamma=0.05, kmeans restarts=10.
BenchConfig parse_config(const nlohmann::json& j,
                         const std::filesystem::path& base_dir);

// parse_config on the contents of `file`, resolving paths against its parent
// directory.
BenchConfig load_config(const std::filesystem::path& file);

// Loads, encodes, and normalizes one registered dataset.
Dataset load_registered_dataset(const DatasetEntry& entry);

}  // namespace alr
