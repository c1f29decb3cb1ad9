#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace alr {

// Dunn's rank-based multiple-comparison z test over all group pairs, with
// average ranks for ties and the tie correction sum(t^3 - t) / (12 (T-1)).
// Two-sided p-values. All-identical observations give p = 1 everywhere.
Eigen::MatrixXd dunn_pairwise(const std::vector<std::vector<double>>& groups);

struct FdrResult {
  std::vector<double> adjusted;
  std::vector<bool> significant;  // adjusted < alpha
};

// Benjamini-Hochberg step-up adjustment, capped at 1, returned in the
// original input order.
FdrResult fdr_bh(const std::vector<double>& raw_p, double alpha);

// Pairwise report in lower-triangle order ((1,0), (2,0), (2,1), ...),
// the shape the p-value table is published in.
struct ComparisonReport {
  std::vector<std::string> group_names;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> raw_p;
  std::vector<double> adjusted_p;
  std::vector<bool> significant;
  double alpha = 0.05;
};

ComparisonReport compare_groups(const std::vector<std::string>& group_names,
                                const std::vector<std::vector<double>>& groups,
                                double alpha);

}  // namespace alr
