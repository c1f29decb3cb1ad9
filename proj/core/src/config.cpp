#include "alr/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "alr/error.hpp"

namespace alr {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw config_error(path + "." + item.key() + ": unknown field");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw config_error(path + ": expected an object");
}

std::string require_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw config_error(path + ": expected a string");
  return j.get<std::string>();
}

int require_int(const json& j, const std::string& path) {
  if (!j.is_number_integer())
    throw config_error(path + ": expected an integer");
  return j.get<int>();
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw config_error(path + ": expected a number");
  return j.get<double>();
}

std::uint64_t require_u64(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw config_error(path + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

ExperimentConfig parse_experiment(const json& j) {
  require_object(j, "experiment");
  reject_unknown_keys(j, "experiment",
                      {"runs", "train_fraction", "budget_fraction", "budget_min",
                       "budget_max", "sigma", "committee_size", "ebmalr_gamma",
                       "kmeans_restarts", "kmeans_max_iter", "seed"});
  ExperimentConfig cfg;
  if (const json* v = find(j, "runs")) cfg.runs = require_int(*v, "experiment.runs");
  if (const json* v = find(j, "train_fraction"))
    cfg.train_fraction = require_number(*v, "experiment.train_fraction");
  if (const json* v = find(j, "budget_fraction"))
    cfg.budget_fraction = require_number(*v, "experiment.budget_fraction");
  if (const json* v = find(j, "budget_min"))
    cfg.budget_bounds.min = require_int(*v, "experiment.budget_min");
  if (const json* v = find(j, "budget_max"))
    cfg.budget_bounds.max = require_int(*v, "experiment.budget_max");
  if (const json* v = find(j, "sigma"))
    cfg.sigma = require_number(*v, "experiment.sigma");
  if (const json* v = find(j, "committee_size"))
    cfg.committee_size = require_int(*v, "experiment.committee_size");
  if (const json* v = find(j, "ebmalr_gamma"))
    cfg.ebmalr_gamma = require_number(*v, "experiment.ebmalr_gamma");
  if (const json* v = find(j, "kmeans_restarts"))
    cfg.kmeans.restarts = require_int(*v, "experiment.kmeans_restarts");
  if (const json* v = find(j, "kmeans_max_iter"))
    cfg.kmeans.max_iter = require_int(*v, "experiment.kmeans_max_iter");
  if (const json* v = find(j, "seed")) cfg.base_seed = require_u64(*v, "experiment.seed");
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw config_error(std::string("experiment: ") + e.what());
  }
  return cfg;
}

std::vector<StrategyKind> parse_strategies(const json& j) {
  if (!j.is_array() || j.empty())
    throw config_error("strategies: expected a non-empty array");
  std::vector<StrategyKind> out;
  std::set<StrategyKind> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "strategies[" + std::to_string(i) + "]";
    const std::string name = require_string(j[i], path);
    const auto kind = parse_strategy_name(name);
    if (!kind) throw config_error(path + ": unknown strategy '" + name + "'");
    if (!seen.insert(*kind).second)
      throw config_error(path + ": duplicate strategy '" + name + "'");
    out.push_back(*kind);
  }
  return out;
}

DatasetEntry parse_dataset(const json& j, const std::string& path,
                           const std::filesystem::path& base_dir) {
  require_object(j, path);
  reject_unknown_keys(j, path, {"name", "path", "target", "categorical"});
  DatasetEntry entry;
  const json* name = find(j, "name");
  if (!name) throw config_error(path + ".name: required field missing");
  entry.name = require_string(*name, path + ".name");
  if (entry.name.empty()) throw config_error(path + ".name: must not be empty");

  const json* file = find(j, "path");
  if (!file) throw config_error(path + ".path: required field missing");
  std::filesystem::path p = require_string(*file, path + ".path");
  if (p.is_relative()) p = base_dir / p;
  if (!std::filesystem::exists(p))
    throw config_error(path + ".path: file not found: " + p.string());
  entry.path = p;

  const json* target = find(j, "target");
  if (!target) throw config_error(path + ".target: required field missing");
  entry.schema.target_column = require_string(*target, path + ".target");

  if (const json* cat = find(j, "categorical")) {
    if (!cat->is_array()) throw config_error(path + ".categorical: expected an array");
    for (std::size_t i = 0; i < cat->size(); ++i)
      entry.schema.categorical_columns.push_back(require_string(
          (*cat)[i], path + ".categorical[" + std::to_string(i) + "]"));
  }
  return entry;
}

StatsOptions parse_stats(const json& j) {
  require_object(j, "stats");
  reject_unknown_keys(j, "stats", {"alpha", "granularity"});
  StatsOptions opts;
  if (const json* v = find(j, "alpha")) {
    opts.alpha = require_number(*v, "stats.alpha");
    if (!(opts.alpha > 0.0 && opts.alpha < 1.0))
      throw config_error("stats.alpha: must lie in (0, 1)");
  }
  if (const json* v = find(j, "granularity")) {
    const std::string g = require_string(*v, "stats.granularity");
    if (g == "dataset")
      opts.granularity = StatsGranularity::per_dataset;
    else if (g == "run")
      opts.granularity = StatsGranularity::per_run;
    else
      throw config_error("stats.granularity: expected 'dataset' or 'run', got '" +
                         g + "'");
  }
  return opts;
}

}  // namespace

BenchConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  require_object(j, "(root)");
  reject_unknown_keys(j, "(root)",
                      {"experiment", "strategies", "datasets", "stats"});

  BenchConfig cfg;
  if (const json* v = find(j, "experiment")) cfg.experiment = parse_experiment(*v);

  const json* strategies = find(j, "strategies");
  if (!strategies) throw config_error("strategies: required field missing");
  cfg.strategies = parse_strategies(*strategies);

  const json* datasets = find(j, "datasets");
  if (!datasets) throw config_error("datasets: required field missing");
  if (!datasets->is_array() || datasets->empty())
    throw config_error("datasets: expected a non-empty array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < datasets->size(); ++i) {
    DatasetEntry entry = parse_dataset(
        (*datasets)[i], "datasets[" + std::to_string(i) + "]", base_dir);
    if (!names.insert(entry.name).second)
      throw config_error("datasets[" + std::to_string(i) + "].name: duplicate '" +
                         entry.name + "'");
    cfg.datasets.push_back(std::move(entry));
  }

  if (const json* v = find(j, "stats")) cfg.stats = parse_stats(*v);
  return cfg;
}

BenchConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw io_error("cannot open config file: " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error("config " + file.string() + ": " + e.what());
  }
  return parse_config(j, file.has_parent_path() ? file.parent_path()
                                                : std::filesystem::path("."));
}

Dataset load_registered_dataset(const DatasetEntry& entry) {
  return load_dataset(entry.path.string(), entry.schema, entry.name);
}

}  // namespace alr
