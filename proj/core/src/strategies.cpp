#include "alr/strategies.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "alr/error.hpp"

namespace alr {

const std::vector<StrategyKind>& all_strategy_kinds() {
  static const std::vector<StrategyKind> kinds = {
      StrategyKind::BL,    StrategyKind::QBC,     StrategyKind::EMCM,
      StrategyKind::EEMCM, StrategyKind::GS,      StrategyKind::RD,
      StrategyKind::RD_QBC, StrategyKind::RD_EMCM, StrategyKind::RD_GS,
      StrategyKind::E1,    StrategyKind::E2,      StrategyKind::E3,
  };
  return kinds;
}

std::string strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::BL: return "BL";
    case StrategyKind::QBC: return "QBC";
    case StrategyKind::EMCM: return "EMCM";
    case StrategyKind::EEMCM: return "EEMCM";
    case StrategyKind::GS: return "GS";
    case StrategyKind::RD: return "RD";
    case StrategyKind::RD_QBC: return "RD-QBC";
    case StrategyKind::RD_EMCM: return "RD-EMCM";
    case StrategyKind::RD_GS: return "RD-GS";
    case StrategyKind::E1: return "E1";
    case StrategyKind::E2: return "E2";
    case StrategyKind::E3: return "E3";
  }
  return "?";
}

std::optional<StrategyKind> parse_strategy_name(const std::string& name) {
  for (StrategyKind kind : all_strategy_kinds()) {
    if (strategy_name(kind) == name) return kind;
  }
  return std::nullopt;
}

int StrategySpec::rd_option() const {
  switch (kind) {
    case StrategyKind::RD: return 1;
    case StrategyKind::RD_QBC: return 2;
    case StrategyKind::RD_EMCM: return 3;
    case StrategyKind::RD_GS: return 4;
    case StrategyKind::E2: return 1;
    default: return 0;
  }
}

PoolState::PoolState(const Dataset& dataset, std::vector<Eigen::Index> pool,
                     std::uint64_t seed)
    : dataset_(&dataset),
      pool_(std::move(pool)),
      labeled_flag_(static_cast<std::size_t>(dataset.n()), 0),
      excluded_flag_(static_cast<std::size_t>(dataset.n()), 0),
      rng_(seed) {
  std::sort(pool_.begin(), pool_.end());
  for (Eigen::Index row : pool_) {
    if (row < 0 || row >= dataset.n()) {
      throw invalid_argument_error("PoolState: pool index out of range");
    }
  }
}

bool PoolState::is_labeled(Eigen::Index row) const {
  return labeled_flag_[static_cast<std::size_t>(row)] != 0;
}

bool PoolState::is_excluded(Eigen::Index row) const {
  return excluded_flag_[static_cast<std::size_t>(row)] != 0;
}

void PoolState::add_label(Eigen::Index row) {
  if (is_labeled(row)) throw invalid_argument_error("sample already labeled");
  if (is_excluded(row)) throw invalid_argument_error("sample is excluded");
  labeled_.push_back(row);
  labels_.push_back(dataset_->y(row));
  labeled_flag_[static_cast<std::size_t>(row)] = 1;
}

void PoolState::exclude(Eigen::Index row) {
  if (is_labeled(row)) throw invalid_argument_error("cannot exclude a labeled sample");
  if (!is_excluded(row)) {
    excluded_.push_back(row);
    excluded_flag_[static_cast<std::size_t>(row)] = 1;
  }
}

std::vector<Eigen::Index> PoolState::selectable() const {
  std::vector<Eigen::Index> out;
  out.reserve(pool_.size());
  for (Eigen::Index row : pool_) {
    if (!is_labeled(row) && !is_excluded(row)) out.push_back(row);
  }
  return out;
}

std::vector<Eigen::Index> PoolState::non_excluded() const {
  std::vector<Eigen::Index> out;
  out.reserve(pool_.size());
  for (Eigen::Index row : pool_) {
    if (!is_excluded(row)) out.push_back(row);
  }
  return out;
}

Eigen::MatrixXd PoolState::labeled_features() const {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(labeled_.size()), dataset_->dim());
  for (std::size_t i = 0; i < labeled_.size(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) = dataset_->X.row(labeled_[i]);
  }
  return X;
}

Eigen::VectorXd PoolState::labeled_targets() const {
  return Eigen::Map<const Eigen::VectorXd>(labels_.data(),
                                           static_cast<Eigen::Index>(labels_.size()));
}

namespace {

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& X,
                            const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
  }
  return out;
}

// argmax over candidates with ties to the lowest index; candidates must be
// ascending for the first-hit rule to equal the lowest-index rule.
Eigen::Index argmax_score(const std::vector<Eigen::Index>& candidates,
                          const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return candidates[best];
}

std::vector<double> committee_scores_qbc(const std::vector<RidgeModel>& committee,
                                         const Eigen::MatrixXd& Xcand) {
  const Eigen::Index n = Xcand.rows();
  const int P = static_cast<int>(committee.size());
  Eigen::MatrixXd preds(n, P);
  for (int p = 0; p < P; ++p) {
    preds.col(p) = predict(committee[static_cast<std::size_t>(p)], Xcand);
  }
  std::vector<double> scores(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mean = preds.row(i).mean();
    scores[static_cast<std::size_t>(i)] =
        (preds.row(i).array() - mean).square().sum() / P;
  }
  return scores;
}

}  // namespace

std::vector<Eigen::Index> init_random(PoolState& state, int d) {
  const auto eligible = state.selectable();
  if (d <= 0) throw invalid_argument_error("init_random: d must be positive");
  if (static_cast<std::size_t>(d) > eligible.size()) {
    throw invalid_argument_error("init_random: d = " + std::to_string(d) +
                                 " exceeds the " + std::to_string(eligible.size()) +
                                 " selectable samples");
  }
  return state.rng().sample_without_replacement(eligible,
                                                static_cast<std::size_t>(d));
}

std::vector<Eigen::Index> rd_initialize(PoolState& state, int d,
                                        const KmeansOptions& options) {
  const auto rows = state.non_excluded();
  if (d <= 0) throw invalid_argument_error("rd_initialize: d must be positive");
  if (static_cast<std::size_t>(d) > rows.size()) {
    throw invalid_argument_error("rd_initialize: d exceeds the pool size");
  }

  const Eigen::MatrixXd X = gather_rows(state.dataset().X, rows);
  const Clustering clustering = kmeans(X, d, state.rng(), options);

  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    members[static_cast<std::size_t>(clustering.assignments[i])].push_back(rows[i]);
  }

  std::vector<Eigen::Index> picks;
  picks.reserve(static_cast<std::size_t>(d));
  std::vector<std::uint8_t> taken(static_cast<std::size_t>(state.dataset().n()), 0);
  for (int c = 0; c < d; ++c) {
    if (members[static_cast<std::size_t>(c)].empty()) continue;  // duplicate-point degeneracy
    const Eigen::Index pick = closest_to_centroid(
        members[static_cast<std::size_t>(c)], state.dataset().X,
        clustering.centroids.row(c));
    picks.push_back(pick);
    taken[static_cast<std::size_t>(pick)] = 1;
  }
  // Backfill in the degenerate case so the initialization always yields d
  // distinct samples.
  for (Eigen::Index row : rows) {
    if (picks.size() == static_cast<std::size_t>(d)) break;
    if (!taken[static_cast<std::size_t>(row)]) {
      picks.push_back(row);
      taken[static_cast<std::size_t>(row)] = 1;
    }
  }
  return picks;
}

Eigen::Index select_qbc(PoolState& state,
                        const std::vector<Eigen::Index>& candidates,
                        int committee_size, double sigma) {
  if (candidates.empty()) throw invalid_argument_error("select_qbc: no candidates");
  if (state.labeled().empty()) {
    throw invalid_argument_error("select_qbc: no labeled samples");
  }
  const auto committee =
      bootstrap_committee(state.labeled_features(), state.labeled_targets(),
                          committee_size, sigma, state.rng());
  const Eigen::MatrixXd Xcand = gather_rows(state.dataset().X, candidates);
  return argmax_score(candidates, committee_scores_qbc(committee, Xcand));
}

Eigen::Index select_emcm(PoolState& state,
                         const std::vector<Eigen::Index>& candidates,
                         int committee_size, double sigma) {
  if (candidates.empty()) throw invalid_argument_error("select_emcm: no candidates");
  if (state.labeled().empty()) {
    throw invalid_argument_error("select_emcm: no labeled samples");
  }
  const Eigen::MatrixXd Xl = state.labeled_features();
  const Eigen::VectorXd yl = state.labeled_targets();
  const RidgeModel master = fit_ridge(Xl, yl, sigma);
  const auto committee =
      bootstrap_committee(Xl, yl, committee_size, sigma, state.rng());

  const Eigen::MatrixXd Xcand = gather_rows(state.dataset().X, candidates);
  const Eigen::VectorXd master_pred = predict(master, Xcand);
  const Eigen::VectorXd norms = Xcand.rowwise().norm();

  std::vector<double> scores(candidates.size(), 0.0);
  for (const auto& model : committee) {
    const Eigen::VectorXd pred = predict(model, Xcand);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      scores[i] += std::abs(pred(row) - master_pred(row)) * norms(row);
    }
  }
  for (auto& s : scores) s /= static_cast<double>(committee.size());
  return argmax_score(candidates, scores);
}

Eigen::Index select_gs(const PoolState& state,
                       const std::vector<Eigen::Index>& candidates) {
  if (candidates.empty()) throw invalid_argument_error("select_gs: no candidates");
  if (state.labeled().empty()) {
    throw invalid_argument_error("select_gs: no labeled samples");
  }
  const Eigen::MatrixXd& X = state.dataset().X;
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double min_d2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index l : state.labeled()) {
      min_d2 = std::min(min_d2, (X.row(candidates[i]) - X.row(l)).squaredNorm());
    }
    scores[i] = min_d2;
  }
  return argmax_score(candidates, scores);
}

Eigen::Index select_rd(PoolState& state, int m, int option, int committee_size,
                       double sigma, const KmeansOptions& options) {
  if (option < 1 || option > 4) {
    throw invalid_argument_error("select_rd: option must be 1..4");
  }
  if (static_cast<int>(state.labeled().size()) != m - 1) {
    throw invalid_argument_error("select_rd: expected " + std::to_string(m - 1) +
                                 " labeled samples");
  }
  const auto rows = state.non_excluded();
  if (rows.size() <= state.labeled().size()) {
    throw invalid_argument_error("select_rd: no unlabeled samples remain");
  }

  const Eigen::MatrixXd X = gather_rows(state.dataset().X, rows);
  const Clustering clustering = kmeans(X, m, state.rng(), options);

  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(m));
  std::vector<std::uint8_t> has_labeled(static_cast<std::size_t>(m), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto c = static_cast<std::size_t>(clustering.assignments[i]);
    members[c].push_back(rows[i]);
    if (state.is_labeled(rows[i])) has_labeled[c] = 1;
  }

  int target = -1;
  for (int c = 0; c < m; ++c) {
    const auto& mem = members[static_cast<std::size_t>(c)];
    if (mem.empty() || has_labeled[static_cast<std::size_t>(c)]) continue;
    if (target < 0 ||
        mem.size() > members[static_cast<std::size_t>(target)].size()) {
      target = c;
    }
  }

  if (target >= 0) {
    const auto& candidates = members[static_cast<std::size_t>(target)];
    switch (option) {
      case 1:
        return closest_to_centroid(candidates, state.dataset().X,
                                   clustering.centroids.row(target));
      case 2:
        return select_qbc(state, candidates, committee_size, sigma);
      case 3:
        return select_emcm(state, candidates, committee_size, sigma);
      default:
        return select_gs(state, candidates);
    }
  }

  // Every cluster already holds a labeled sample (possible only in
  // duplicate-point degeneracies): widen to all unlabeled samples.
  const auto candidates = state.selectable();
  switch (option) {
    case 1: {
      // Closest to the centroid of the candidate's own cluster.
      std::unordered_map<Eigen::Index, int> cluster_of;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        cluster_of.emplace(rows[i], clustering.assignments[i]);
      }
      Eigen::Index best = candidates.front();
      double best_dist = std::numeric_limits<double>::infinity();
      for (Eigen::Index cand : candidates) {
        const double dist =
            (state.dataset().X.row(cand) -
             clustering.centroids.row(cluster_of.at(cand)))
                .squaredNorm();
        if (dist < best_dist) {
          best_dist = dist;
          best = cand;
        }
      }
      return best;
    }
    case 2:
      return select_qbc(state, candidates, committee_size, sigma);
    case 3:
      return select_emcm(state, candidates, committee_size, sigma);
    default:
      return select_gs(state, candidates);
  }
}

OutlierFilterResult ebmalr_outlier_filter(PoolState& state, int d, double gamma,
                                          const KmeansOptions& options) {
  if (gamma < 0.0 || gamma >= 0.5) {
    throw invalid_argument_error("ebmalr_outlier_filter: gamma must be in [0, 0.5)");
  }
  auto survivors = state.non_excluded();
  const double n_original = static_cast<double>(survivors.size());
  if (static_cast<std::size_t>(d) > survivors.size()) {
    throw invalid_argument_error("ebmalr_outlier_filter: d exceeds the pool size");
  }
  const double threshold = std::max(1.0, gamma * n_original);

  OutlierFilterResult result;
  while (true) {
    const Eigen::MatrixXd X = gather_rows(state.dataset().X, survivors);
    result.clustering = kmeans(X, d, state.rng(), options);

    std::vector<std::uint8_t> drop_cluster(static_cast<std::size_t>(d), 0);
    bool any_dropped = false;
    for (int c = 0; c < d; ++c) {
      const int size = result.clustering.sizes[static_cast<std::size_t>(c)];
      if (size > 0 && static_cast<double>(size) <= threshold) {
        drop_cluster[static_cast<std::size_t>(c)] = 1;
        any_dropped = true;
      }
    }
    if (!any_dropped) break;

    std::vector<Eigen::Index> next;
    next.reserve(survivors.size());
    for (std::size_t i = 0; i < survivors.size(); ++i) {
      const auto c = static_cast<std::size_t>(result.clustering.assignments[i]);
      if (drop_cluster[c]) {
        result.removed.push_back(survivors[i]);
      } else {
        next.push_back(survivors[i]);
      }
    }
    survivors = std::move(next);
    if (survivors.size() < static_cast<std::size_t>(d)) {
      throw numeric_error(
          "ebmalr_outlier_filter: fewer than d samples survive; the dataset or "
          "gamma is degenerate");
    }
  }

  std::sort(result.removed.begin(), result.removed.end());
  for (Eigen::Index row : result.removed) state.exclude(row);
  result.kept = std::move(survivors);
  return result;
}

std::vector<Eigen::Index> run_strategy(const StrategySpec& spec, PoolState& state,
                                       int budget) {
  if (!state.labeled().empty()) {
    throw invalid_argument_error("run_strategy: state already has labels");
  }
  const Eigen::Index d = state.dataset().dim();
  if (budget < d) {
    throw invalid_argument_error("run_strategy: budget below the feature count");
  }
  if (static_cast<std::size_t>(budget) > state.pool().size()) {
    throw invalid_argument_error("run_strategy: budget exceeds the pool size");
  }

  const int di = static_cast<int>(d);
  const auto label_all = [&state](const std::vector<Eigen::Index>& rows) {
    for (Eigen::Index row : rows) state.add_label(row);
  };
  const auto random_pick = [&state]() {
    const auto eligible = state.selectable();
    if (eligible.empty()) throw numeric_error("run_strategy: pool exhausted");
    return eligible[state.rng().uniform_below(eligible.size())];
  };

  // Initialization.
  switch (spec.kind) {
    case StrategyKind::BL:
    case StrategyKind::QBC:
    case StrategyKind::EMCM:
    case StrategyKind::GS:
    case StrategyKind::E2:
    case StrategyKind::E3:
      label_all(init_random(state, di));
      break;
    case StrategyKind::RD:
    case StrategyKind::RD_QBC:
    case StrategyKind::RD_EMCM:
    case StrategyKind::RD_GS:
    case StrategyKind::E1:
      label_all(rd_initialize(state, di, spec.kmeans));
      break;
    case StrategyKind::EEMCM: {
      const auto filtered = ebmalr_outlier_filter(state, di, spec.ebmalr_gamma,
                                                  spec.kmeans);
      if (filtered.kept.size() < static_cast<std::size_t>(budget)) {
        throw numeric_error(
            "run_strategy: outlier filter left fewer samples than the budget");
      }
      std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(di));
      for (std::size_t i = 0; i < filtered.kept.size(); ++i) {
        members[static_cast<std::size_t>(filtered.clustering.assignments[i])]
            .push_back(filtered.kept[i]);
      }
      std::vector<Eigen::Index> picks;
      for (int c = 0; c < di; ++c) {
        if (members[static_cast<std::size_t>(c)].empty()) continue;
        picks.push_back(closest_to_centroid(members[static_cast<std::size_t>(c)],
                                            state.dataset().X,
                                            filtered.clustering.centroids.row(c)));
      }
      for (Eigen::Index row : filtered.kept) {
        if (picks.size() == static_cast<std::size_t>(di)) break;
        if (std::find(picks.begin(), picks.end(), row) == picks.end()) {
          picks.push_back(row);
        }
      }
      label_all(picks);
      break;
    }
  }

  // Iterations.
  for (int m = di + 1; m <= budget; ++m) {
    Eigen::Index pick = -1;
    switch (spec.kind) {
      case StrategyKind::BL:
      case StrategyKind::E1:
        pick = random_pick();
        break;
      case StrategyKind::QBC:
        pick = select_qbc(state, state.selectable(), spec.committee_size, spec.sigma);
        break;
      case StrategyKind::EMCM:
      case StrategyKind::EEMCM:
      case StrategyKind::E3:
        pick = select_emcm(state, state.selectable(), spec.committee_size, spec.sigma);
        break;
      case StrategyKind::GS:
        pick = select_gs(state, state.selectable());
        break;
      case StrategyKind::RD:
      case StrategyKind::RD_QBC:
      case StrategyKind::RD_EMCM:
      case StrategyKind::RD_GS:
      case StrategyKind::E2:
        pick = select_rd(state, m, spec.rd_option(), spec.committee_size,
                         spec.sigma, spec.kmeans);
        break;
    }
    state.add_label(pick);
  }
  return state.labeled();
}

}  // namespace alr
