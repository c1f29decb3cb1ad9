#include "alr/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "alr/error.hpp"

namespace alr {
namespace {

// Nearest-centroid assignment. Scores are ||c_j||^2 - 2 x.c_j (the per-point
// ||x||^2 term is constant under argmin); ties go to the lowest centroid
// index. The cross term is one gemm for the whole pool.
void assign_nearest(const Eigen::Ref<const Eigen::MatrixXd>& X,
                    const Eigen::MatrixXd& centroids,
                    std::vector<int>& assignments) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = centroids.rows();
  const Eigen::MatrixXd cross = X * centroids.transpose();  // n x k
  const Eigen::VectorXd c2 = centroids.rowwise().squaredNorm();
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    double best_score = c2(0) - 2.0 * cross(i, 0);
    for (Eigen::Index j = 1; j < k; ++j) {
      const double score = c2(j) - 2.0 * cross(i, j);
      if (score < best_score) {
        best_score = score;
        best = static_cast<int>(j);
      }
    }
    assignments[static_cast<std::size_t>(i)] = best;
  }
}

double total_sse(const Eigen::Ref<const Eigen::MatrixXd>& X,
                 const Eigen::MatrixXd& centroids,
                 const std::vector<int>& assignments) {
  double sse = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    sse += (X.row(i) - centroids.row(assignments[static_cast<std::size_t>(i)]))
               .squaredNorm();
  }
  return sse;
}

// Point with the largest minimum distance to the rows of `centroids`
// restricted to `active` rows; ties to the lowest point index.
Eigen::Index farthest_point(const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const Eigen::MatrixXd& centroids,
                            const std::vector<int>& active) {
  Eigen::Index best = 0;
  double best_dist = -1.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double min_d = std::numeric_limits<double>::infinity();
    for (int j : active) {
      min_d = std::min(min_d, (X.row(i) - centroids.row(j)).squaredNorm());
    }
    if (min_d > best_dist) {
      best_dist = min_d;
      best = i;
    }
  }
  return best;
}

Eigen::MatrixXd seed_kmeanspp(const Eigen::Ref<const Eigen::MatrixXd>& X, int k,
                              Rng& rng) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd centroids(k, X.cols());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);

  Eigen::Index first = static_cast<Eigen::Index>(
      rng.uniform_below(static_cast<std::uint64_t>(n)));
  centroids.row(0) = X.row(first);
  chosen[static_cast<std::size_t>(first)] = true;

  Eigen::VectorXd min_d2 =
      (X.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = min_d2.sum();
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double r = rng.uniform01() * total;
      double cum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += min_d2(i);
        if (cum > r) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = n - 1;  // r landed on the last accumulation edge
    } else {
      // All remaining mass is zero (duplicate points); take the lowest
      // unchosen index.
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = 0;
    }
    centroids.row(c) = X.row(pick);
    chosen[static_cast<std::size_t>(pick)] = true;
    min_d2 = min_d2.cwiseMin(
        (X.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

// Means per cluster; an emptied cluster is reseeded with the point farthest
// from the centroids placed so far.
void update_centroids(const Eigen::Ref<const Eigen::MatrixXd>& X, int k,
                      const std::vector<int>& assignments,
                      Eigen::MatrixXd& centroids) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, X.cols());
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int a = assignments[static_cast<std::size_t>(i)];
    sums.row(a) += X.row(i);
    ++counts[static_cast<std::size_t>(a)];
  }
  std::vector<int> active;
  std::vector<int> empties;
  for (int j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)] > 0) {
      centroids.row(j) = sums.row(j) / counts[static_cast<std::size_t>(j)];
      active.push_back(j);
    } else {
      empties.push_back(j);
    }
  }
  for (int j : empties) {
    centroids.row(j) = X.row(farthest_point(X, centroids, active));
    active.push_back(j);
  }
}

}  // namespace

Clustering kmeans_single_run(const Eigen::Ref<const Eigen::MatrixXd>& X, int k,
                             Rng& rng, int max_iter,
                             std::vector<double>* sse_trace) {
  const Eigen::Index n = X.rows();
  Clustering result;
  result.k = k;
  result.centroids = seed_kmeanspp(X, k, rng);
  result.assignments.resize(static_cast<std::size_t>(n));
  assign_nearest(X, result.centroids, result.assignments);
  if (sse_trace) sse_trace->push_back(total_sse(X, result.centroids, result.assignments));

  std::vector<int> next(static_cast<std::size_t>(n));
  for (int iter = 0; iter < max_iter; ++iter) {
    update_centroids(X, k, result.assignments, result.centroids);
    assign_nearest(X, result.centroids, next);
    const bool stable = next == result.assignments;
    result.assignments = next;
    if (sse_trace) sse_trace->push_back(total_sse(X, result.centroids, result.assignments));
    if (stable) break;
  }

  result.sizes.assign(static_cast<std::size_t>(k), 0);
  for (int a : result.assignments) ++result.sizes[static_cast<std::size_t>(a)];
  result.sse = total_sse(X, result.centroids, result.assignments);
  return result;
}

Clustering kmeans(const Eigen::Ref<const Eigen::MatrixXd>& X, int k, Rng& rng,
                  const KmeansOptions& options) {
  const Eigen::Index n = X.rows();
  if (k <= 0) throw invalid_argument_error("kmeans: k must be positive");
  if (static_cast<Eigen::Index>(k) > n) {
    throw invalid_argument_error("kmeans: k = " + std::to_string(k) +
                                 " exceeds the " + std::to_string(n) +
                                 " available points");
  }
  if (!X.allFinite()) throw numeric_error("kmeans: non-finite input");
  if (options.restarts < 1 || options.max_iter < 1) {
    throw invalid_argument_error("kmeans: restarts and max_iter must be positive");
  }

  // Sub-seeds are drawn up front so restarts could run in parallel without
  // changing the result.
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(options.restarts));
  for (auto& s : seeds) s = rng.next_u64();

  Clustering best;
  bool have_best = false;
  for (std::uint64_t seed : seeds) {
    Rng restart_rng(seed);
    Clustering run = kmeans_single_run(X, k, restart_rng, options.max_iter);
    if (!have_best || run.sse < best.sse) {
      best = std::move(run);
      have_best = true;
    }
  }
  return best;
}

Eigen::Index closest_to_centroid(
    const std::vector<Eigen::Index>& members,
    const Eigen::Ref<const Eigen::MatrixXd>& X,
    const Eigen::Ref<const Eigen::RowVectorXd>& centroid) {
  if (members.empty()) {
    throw invalid_argument_error("closest_to_centroid: empty member list");
  }
  Eigen::Index best = members.front();
  double best_dist = (X.row(best) - centroid).squaredNorm();
  for (std::size_t i = 1; i < members.size(); ++i) {
    const Eigen::Index idx = members[i];
    const double dist = (X.row(idx) - centroid).squaredNorm();
    if (dist < best_dist || (dist == best_dist && idx < best)) {
      best_dist = dist;
      best = idx;
    }
  }
  return best;
}

}  // namespace alr
