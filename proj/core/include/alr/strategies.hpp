#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "alr/dataset.hpp"
#include "alr/kmeans.hpp"
#include "alr/ridge.hpp"
#include "alr/rng.hpp"

namespace alr {

// The nine benchmark strategies plus the three single-enhancement ablations
// of RD-EMCM (E1: clustered init only, E2: clustered iteration only,
// E3: informative iteration only).
enum class StrategyKind {
  BL,
  QBC,
  EMCM,
  EEMCM,
  GS,
  RD,
  RD_QBC,
  RD_EMCM,
  RD_GS,
  E1,
  E2,
  E3,
};

const std::vector<StrategyKind>& all_strategy_kinds();
std::string strategy_name(StrategyKind kind);
std::optional<StrategyKind> parse_strategy_name(const std::string& name);

struct StrategySpec {
  StrategyKind kind = StrategyKind::BL;
  int committee_size = 4;      // P, bootstrap committee members
  double ebmalr_gamma = 0.05;  // outlier threshold factor, in [0, 0.5)
  double sigma = 0.01;         // ridge parameter for all fitted models
  KmeansOptions kmeans;

  // Algorithm option used inside the per-iteration cluster: 1 = centroid,
  // 2 = QBC, 3 = EMCM, 4 = GS. Zero for non-RD kinds.
  int rd_option() const;
};

// One active-learning run over a fixed candidate pool. `pool` holds dataset
// row indices (ascending); `labeled` is the query order and `labels` the
// ground-truth targets returned by the oracle. Confined to a single thread.
class PoolState {
 public:
  PoolState(const Dataset& dataset, std::vector<Eigen::Index> pool,
            std::uint64_t seed);

  const Dataset& dataset() const { return *dataset_; }
  const std::vector<Eigen::Index>& pool() const { return pool_; }
  const std::vector<Eigen::Index>& labeled() const { return labeled_; }
  const std::vector<double>& labels() const { return labels_; }
  const std::vector<Eigen::Index>& excluded() const { return excluded_; }
  Rng& rng() { return rng_; }

  bool is_labeled(Eigen::Index row) const;
  bool is_excluded(Eigen::Index row) const;

  // Queries the oracle (dataset ground truth) for one more sample.
  void add_label(Eigen::Index row);
  void exclude(Eigen::Index row);

  // Pool rows that may still be queried, ascending.
  std::vector<Eigen::Index> selectable() const;
  // Pool rows that survived outlier exclusion (labeled or not), ascending.
  std::vector<Eigen::Index> non_excluded() const;

  // Feature rows / targets of the labeled samples, in query order.
  Eigen::MatrixXd labeled_features() const;
  Eigen::VectorXd labeled_targets() const;

 private:
  const Dataset* dataset_;
  std::vector<Eigen::Index> pool_;
  std::vector<Eigen::Index> labeled_;
  std::vector<double> labels_;
  std::vector<Eigen::Index> excluded_;
  std::vector<std::uint8_t> labeled_flag_;   // indexed by dataset row
  std::vector<std::uint8_t> excluded_flag_;  // indexed by dataset row
  Rng rng_;
};

// d distinct indices drawn uniformly without replacement from the
// selectable samples, in draw order.
std::vector<Eigen::Index> init_random(PoolState& state, int d);

// k-means (k = d) over the non-excluded pool; one closest-to-centroid member
// per cluster, ordered by cluster index.
std::vector<Eigen::Index> rd_initialize(PoolState& state, int d,
                                        const KmeansOptions& options = {});

// Maximum committee prediction variance (population variance over the P
// bootstrap models). Ties to the lowest index.
Eigen::Index select_qbc(PoolState& state,
                        const std::vector<Eigen::Index>& candidates,
                        int committee_size, double sigma = 0.01);

// Maximum expected model change g(x) = (1/P) sum_p |y^p - y_hat| * ||x||,
// with the master model fit on all labeled samples. Ties to the lowest index.
Eigen::Index select_emcm(PoolState& state,
                         const std::vector<Eigen::Index>& candidates,
                         int committee_size, double sigma = 0.01);

// Greedy sampling: maximum over candidates of the minimum distance to any
// labeled sample. Reads no labels and no model. Ties to the lowest index.
Eigen::Index select_gs(const PoolState& state,
                       const std::vector<Eigen::Index>& candidates);

// One iteration of the RD loop at step m (so |labeled| = m-1): k-means with
// k = m over the non-excluded pool, then the given option applied inside the
// largest cluster holding no labeled sample. When every cluster holds a
// labeled sample the candidate set widens to all unlabeled samples.
Eigen::Index select_rd(PoolState& state, int m, int option, int committee_size,
                       double sigma = 0.01, const KmeansOptions& options = {});

struct OutlierFilterResult {
  std::vector<Eigen::Index> kept;     // ascending dataset rows
  std::vector<Eigen::Index> removed;  // ascending dataset rows
  Clustering clustering;              // final pass, over `kept` in order
};

// EBMALR outlier loop: repeatedly k-means (k = d) the surviving set and drop
// every cluster with size <= max(1, gamma * N_original) until a fixed point.
// Removed rows are marked excluded in the state.
OutlierFilterResult ebmalr_outlier_filter(PoolState& state, int d, double gamma,
                                          const KmeansOptions& options = {});

// Full query sequence of length M for the given strategy, starting from an
// empty labeled set. The state retains the labeled order and labels.
std::vector<Eigen::Index> run_strategy(const StrategySpec& spec, PoolState& state,
                                       int budget);

}  // namespace alr
