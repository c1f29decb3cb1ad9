#include "alr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

#include "alr/error.hpp"

namespace alr {
namespace {

// Average ranks (1-based) with ties sharing the mean of their rank span.
// Also accumulates the tie correction term sum(t^3 - t).
std::vector<double> average_ranks(const std::vector<double>& values,
                                  double* tie_term) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });

  std::vector<double> ranks(n, 0.0);
  *tie_term = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    const double t = static_cast<double>(j - i + 1);
    *tie_term += t * t * t - t;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

Eigen::MatrixXd dunn_pairwise(const std::vector<std::vector<double>>& groups) {
  const std::size_t g = groups.size();
  if (g < 2) throw invalid_argument_error("dunn_pairwise needs at least 2 groups");

  std::vector<double> pooled;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < g; ++i) {
    if (groups[i].size() < 2)
      throw invalid_argument_error("dunn_pairwise: group " + std::to_string(i) +
                                   " needs at least 2 observations");
    for (double v : groups[i]) {
      if (!std::isfinite(v))
        throw invalid_argument_error("dunn_pairwise: non-finite observation in group " +
                                     std::to_string(i));
      pooled.push_back(v);
      owner.push_back(i);
    }
  }

  const double total = static_cast<double>(pooled.size());
  double tie_term = 0.0;
  const std::vector<double> ranks = average_ranks(pooled, &tie_term);

  std::vector<double> mean_rank(g, 0.0);
  std::vector<double> count(g, 0.0);
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    mean_rank[owner[i]] += ranks[i];
    count[owner[i]] += 1.0;
  }
  for (std::size_t i = 0; i < g; ++i) mean_rank[i] /= count[i];

  // Tie-corrected variance factor; zero (up to rounding) when every pooled
  // observation is identical, in which case no pair can be distinguished.
  const double base = total * (total + 1.0) / 12.0 -
                      tie_term / (12.0 * (total - 1.0));

  Eigen::MatrixXd p = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(g),
                                            static_cast<Eigen::Index>(g));
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i + 1; j < g; ++j) {
      double pij = 1.0;
      const double var = base * (1.0 / count[i] + 1.0 / count[j]);
      if (var > 0.0) {
        const double z = (mean_rank[i] - mean_rank[j]) / std::sqrt(var);
        pij = std::erfc(std::abs(z) / std::sqrt(2.0));
      }
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pij;
      p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = pij;
    }
  }
  return p;
}

FdrResult fdr_bh(const std::vector<double>& raw_p, double alpha) {
  if (raw_p.empty()) throw invalid_argument_error("fdr_bh: empty p-value list");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw invalid_argument_error("fdr_bh: alpha must lie in (0, 1)");
  for (double v : raw_p) {
    if (!(v >= 0.0 && v <= 1.0))
      throw invalid_argument_error("fdr_bh: p-values must lie in [0, 1]");
  }

  const std::size_t m = raw_p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return raw_p[a] < raw_p[b];
  });

  FdrResult out;
  out.adjusted.assign(m, 0.0);
  out.significant.assign(m, false);
  double running = 1.0;
  for (std::size_t r = m; r-- > 0;) {
    const double scaled =
        raw_p[order[r]] * static_cast<double>(m) / static_cast<double>(r + 1);
    running = std::min(running, scaled);
    out.adjusted[order[r]] = std::min(running, 1.0);
  }
  for (std::size_t i = 0; i < m; ++i) out.significant[i] = out.adjusted[i] < alpha;
  return out;
}

ComparisonReport compare_groups(const std::vector<std::string>& group_names,
                                const std::vector<std::vector<double>>& groups,
                                double alpha) {
  if (group_names.size() != groups.size())
    throw invalid_argument_error("compare_groups: name/group count mismatch");
  const Eigen::MatrixXd p = dunn_pairwise(groups);

  ComparisonReport report;
  report.group_names = group_names;
  report.alpha = alpha;
  for (Eigen::Index i = 1; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      report.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
      report.raw_p.push_back(p(i, j));
    }
  }
  const FdrResult fdr = fdr_bh(report.raw_p, alpha);
  report.adjusted_p = fdr.adjusted;
  report.significant = fdr.significant;
  return report;
}

}  // namespace alr
