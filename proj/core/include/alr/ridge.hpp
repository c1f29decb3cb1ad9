#pragma once

#include <Eigen/Core>
#include <vector>

#include "alr/rng.hpp"

namespace alr {

// Closed-form ridge regression. The intercept is handled by centering and is
// not penalized, so results are invariant to a constant target offset.
struct RidgeModel {
  Eigen::VectorXd w;
  double b = 0.0;
  double sigma = 0.0;

  double predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    return x.dot(w) + b;
  }
};

// Solves w = (Xc' Xc + sigma I)^-1 Xc' yc over the m given rows, Xc/yc
// column-mean-centered, then b = mean(y) - w . mean(x). Duplicate rows
// contribute with multiplicity. sigma = 0 requires a full-rank centered Gram
// matrix and falls back to an error otherwise.
RidgeModel fit_ridge(const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const Eigen::Ref<const Eigen::VectorXd>& y, double sigma);

Eigen::VectorXd predict(const RidgeModel& model,
                        const Eigen::Ref<const Eigen::MatrixXd>& X);

// The resample plan behind bootstrap_committee: P * m indices in [0, m),
// drawn row by row with rng.uniform_below(m), committee member by committee
// member. Exposed so tests can replay the exact draw sequence.
std::vector<std::vector<Eigen::Index>> bootstrap_draws(Eigen::Index m, int members,
                                                       Rng& rng);

// P models, each fit on m rows drawn uniformly with replacement, in draw
// order. Deterministic given the rng state.
std::vector<RidgeModel> bootstrap_committee(
    const Eigen::Ref<const Eigen::MatrixXd>& X,
    const Eigen::Ref<const Eigen::VectorXd>& y, int members, double sigma,
    Rng& rng);

}  // namespace alr
