#pragma once

#include <Eigen/Core>
#include <vector>

#include "alr/rng.hpp"

namespace alr {

struct Clustering {
  int k = 0;
  std::vector<int> assignments;   // per row, in [0, k)
  Eigen::MatrixXd centroids;      // k x d
  std::vector<int> sizes;         // per cluster
  double sse = 0.0;
};

struct KmeansOptions {
  int restarts = 10;
  int max_iter = 300;
};

// Lloyd iterations from k-means++ seeding. Runs `restarts` independent
// attempts (sub-seeds drawn from rng up front) and keeps the smallest SSE,
// ties to the earliest restart. Every tie in the algorithm (nearest centroid,
// seeding, equal SSE) breaks to the lowest index so results are reproducible.
// An emptied cluster is reseeded with the point farthest from the current
// centroid set.
Clustering kmeans(const Eigen::Ref<const Eigen::MatrixXd>& X, int k, Rng& rng,
                  const KmeansOptions& options = {});

// Single seeded run that records the SSE after each Lloyd iteration.
// The trace is what the monotonicity tests look at.
Clustering kmeans_single_run(const Eigen::Ref<const Eigen::MatrixXd>& X, int k,
                             Rng& rng, int max_iter,
                             std::vector<double>* sse_trace = nullptr);

// Member of `members` closest to `centroid` in Euclidean distance,
// ties to the lowest member value.
Eigen::Index closest_to_centroid(const std::vector<Eigen::Index>& members,
                                 const Eigen::Ref<const Eigen::MatrixXd>& X,
                                 const Eigen::Ref<const Eigen::RowVectorXd>& centroid);

}  // namespace alr
