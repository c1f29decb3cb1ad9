#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "alr/dataset.hpp"

namespace alr {

// Two Gaussian blobs in R^5 at +/-2 per coordinate, N=200. The target is
// linear with a shared slope plus a per-blob intercept and Gaussian noise,
// so covering both blobs early matters (initialization) and so does picking
// informative points within a blob (selection).
Dataset make_two_blob_dataset(std::uint64_t seed);

// Shape of a synthetic benchmark CSV: clustered numeric features, an
// optional categorical column with additive level effects, linear target.
struct SyntheticSpec {
  std::string name;
  long rows = 0;
  int numeric_columns = 0;
  int categorical_levels = 0;  // 0 = none
  int clusters = 3;
  double noise = 0.3;
  std::uint64_t seed = 1;
  // Cluster centers are drawn from U[-center_scale, center_scale] per
  // coordinate against unit within-cluster noise. Small values give
  // overlapping clusters whose k-means partitions stay balanced.
  double center_scale = 3.0;
};

// The five small benchmark shapes the replication harness substitutes when
// no real CSVs are installed under data/.
const std::vector<SyntheticSpec>& standin_specs();

// Writes header + rows (columns x1..xk[, cat], y) and returns the schema to
// load it with. Deterministic for a given spec.
CsvSchema write_synthetic_csv(const std::filesystem::path& path,
                              const SyntheticSpec& spec);

}  // namespace alr
