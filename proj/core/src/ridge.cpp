#include "alr/ridge.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "alr/error.hpp"

namespace alr {

RidgeModel fit_ridge(const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const Eigen::Ref<const Eigen::VectorXd>& y, double sigma) {
  const Eigen::Index m = X.rows();
  const Eigen::Index d = X.cols();
  if (m < 1) throw invalid_argument_error("fit_ridge: no rows");
  if (y.size() != m) throw invalid_argument_error("fit_ridge: X/y row mismatch");
  if (sigma < 0.0) throw invalid_argument_error("fit_ridge: sigma must be >= 0");
  if (!X.allFinite() || !y.allFinite()) {
    throw numeric_error("fit_ridge: non-finite input");
  }

  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;

  Eigen::MatrixXd gram = Xc.transpose() * Xc;
  gram.diagonal().array() += sigma;
  const Eigen::VectorXd rhs = Xc.transpose() * yc;

  RidgeModel model;
  model.sigma = sigma;
  if (sigma > 0.0) {
    model.w = gram.ldlt().solve(rhs);
  } else {
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (lu.rank() < d) {
      throw numeric_error("fit_ridge: sigma = 0 on a rank-deficient system");
    }
    model.w = lu.solve(rhs);
  }
  model.b = y_mean - model.w.dot(x_mean);
  if (!model.w.allFinite() || !std::isfinite(model.b)) {
    throw numeric_error("fit_ridge: solve produced non-finite coefficients");
  }
  return model;
}

Eigen::VectorXd predict(const RidgeModel& model,
                        const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (X.cols() != model.w.size()) {
    throw invalid_argument_error("predict: expected " +
                                 std::to_string(model.w.size()) +
                                 " features, got " + std::to_string(X.cols()));
  }
  return (X * model.w).array() + model.b;
}

std::vector<std::vector<Eigen::Index>> bootstrap_draws(Eigen::Index m, int members,
                                                       Rng& rng) {
  std::vector<std::vector<Eigen::Index>> draws(static_cast<std::size_t>(members));
  for (auto& member : draws) {
    member.resize(static_cast<std::size_t>(m));
    for (auto& idx : member) {
      idx = static_cast<Eigen::Index>(
          rng.uniform_below(static_cast<std::uint64_t>(m)));
    }
  }
  return draws;
}

std::vector<RidgeModel> bootstrap_committee(
    const Eigen::Ref<const Eigen::MatrixXd>& X,
    const Eigen::Ref<const Eigen::VectorXd>& y, int members, double sigma,
    Rng& rng) {
  const Eigen::Index m = X.rows();
  if (m < 1) throw invalid_argument_error("bootstrap_committee: no rows");
  if (members < 2) {
    throw invalid_argument_error("bootstrap_committee: need at least 2 members");
  }

  const auto draws = bootstrap_draws(m, members, rng);
  std::vector<RidgeModel> committee;
  committee.reserve(draws.size());
  Eigen::MatrixXd Xb(m, X.cols());
  Eigen::VectorXd yb(m);
  for (const auto& member : draws) {
    for (Eigen::Index i = 0; i < m; ++i) {
      Xb.row(i) = X.row(member[static_cast<std::size_t>(i)]);
      yb(i) = y(member[static_cast<std::size_t>(i)]);
    }
    committee.push_back(fit_ridge(Xb, yb, sigma));
  }
  return committee;
}

}  // namespace alr
