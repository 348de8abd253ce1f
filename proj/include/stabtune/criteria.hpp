#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "stabtune/dataset.hpp"
#include "stabtune/error.hpp"
#include "stabtune/penalty.hpp"
#include "stabtune/rng.hpp"
#include "stabtune/solver.hpp"

namespace stabtune {

enum class Criterion { kappa, cp, bic, cv, gcv };

inline const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::kappa: return "kappa";
    case Criterion::cp: return "cp";
    case Criterion::bic: return "bic";
    case Criterion::cv: return "cv";
    case Criterion::gcv: return "gcv";
  }
  throw ArgumentError("unknown criterion");
}

inline Criterion criterion_from_string(const std::string& name) {
  if (name == "kappa") return Criterion::kappa;
  if (name == "cp") return Criterion::cp;
  if (name == "bic") return Criterion::bic;
  if (name == "cv") return Criterion::cv;
  if (name == "gcv") return Criterion::gcv;
  throw ArgumentError("unknown criterion '" + name +
                      "' (expected kappa, cp, bic, cv, or gcv)");
}

struct CriterionScore {
  Criterion criterion = Criterion::bic;
  double lambda = 0.0;
  double score = 0.0;
  int df_hat = 0;
  double sse = 0.0;
};

// Model degrees of freedom, estimated as the number of selected variables.
inline int df_hat(const FitResult& fit) { return fit.active.size(); }

inline double sse_of(const Dataset& ds, const Eigen::VectorXd& beta) {
  return (ds.y - ds.X * beta).squaredNorm();
}

// Error variance from the saturated model: the all-variables OLS residual
// sum of squares over (n - p). Needs more rows than columns.
inline double sigma2_saturated(const Dataset& ds) {
  ds.validate();
  if (ds.n() <= ds.p())
    throw DataError("saturated variance estimate needs n > p, got n = " +
                    std::to_string(ds.n()) + ", p = " + std::to_string(ds.p()));
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ds.X);
  if (qr.rank() < ds.p())
    throw DataError("design matrix is rank deficient; saturated variance "
                    "estimate is unavailable");
  const Eigen::VectorXd ols = qr.solve(ds.y);
  return (ds.y - ds.X * ols).squaredNorm() /
         static_cast<double>(ds.n() - ds.p());
}

// sse/sigma2 - n + 2 df.
inline double cp_score(double sse, double sigma2, int n, int df) {
  if (!(sigma2 > 0.0))
    throw NumericError("saturated variance estimate is not positive");
  return sse / sigma2 - static_cast<double>(n) + 2.0 * static_cast<double>(df);
}

// log(sse/n) + log(n) df/n.
inline double bic_score(double sse, int n, int df) {
  if (!(sse > 0.0))
    throw NumericError("residual sum of squares must be positive for the "
                       "log-based score");
  const double nd = static_cast<double>(n);
  return std::log(sse / nd) + std::log(nd) * static_cast<double>(df) / nd;
}

// sse / (n (1 - df/n)^2).
inline double gcv_score(double sse, int n, int df) {
  if (df >= n)
    throw NumericError("generalized cross validation needs df < n");
  const double nd = static_cast<double>(n);
  const double shrink = 1.0 - static_cast<double>(df) / nd;
  return sse / (nd * shrink * shrink);
}

namespace detail {

// Random near-equal partition of 0..n-1 into `folds` groups (sizes differ
// by at most one).
inline std::vector<std::vector<int>> make_folds(int n, int folds,
                                                RngStream& rng) {
  if (folds < 2) throw ArgumentError("cross validation needs >= 2 folds");
  if (n / folds < 2)
    throw DataError("cross validation with " + std::to_string(folds) +
                    " folds needs at least " + std::to_string(2 * folds) +
                    " rows, got " + std::to_string(n));
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);
  std::vector<std::vector<int>> out(static_cast<std::size_t>(folds));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i % folds)].push_back(
        perm[static_cast<std::size_t>(i)]);
  return out;
}

// Held-out squared error summed over folds, for every lambda in one pass.
// The fold partition is drawn once; each fold's training part is re-centered
// and re-standardized and, for the adaptive penalty, re-weighted, exactly as
// a fresh fit on that subset would be. Predictions are mapped back through
// the training transform so they live in the units of ds. The grid must be
// non-ascending but, unlike fit_path, lambda = 0 is allowed.
inline std::vector<double> cv_path_scores(const Dataset& ds,
                                          const PenaltySpec& penalty,
                                          const std::vector<double>& grid,
                                          int folds, RngStream& rng) {
  ds.validate();
  if (grid.empty()) throw ArgumentError("lambda grid is empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0))
      throw ArgumentError("lambda grid values must be >= 0");
    if (k > 0 && grid[k] > grid[k - 1])
      throw ArgumentError("lambda grid must be sorted descending");
  }
  const auto fold_idx = make_folds(static_cast<int>(ds.n()), folds, rng);
  std::vector<double> total(grid.size(), 0.0);
  for (int s = 0; s < folds; ++s) {
    std::vector<int> train_idx;
    for (int t = 0; t < folds; ++t)
      if (t != s)
        train_idx.insert(train_idx.end(),
                         fold_idx[static_cast<std::size_t>(t)].begin(),
                         fold_idx[static_cast<std::size_t>(t)].end());
    const Dataset train = center_and_scale(ds.rows(train_idx), true);
    const Dataset val = ds.rows(fold_idx[static_cast<std::size_t>(s)]);
    PenaltySpec fold_penalty = penalty;
    if (penalty.kind == PenaltyKind::adaptive_lasso)
      fold_penalty.weights = adaptive_weights(train);
    Eigen::VectorXd warm;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const FitResult fit_k =
          fit(train, fold_penalty, grid[k], k > 0 ? &warm : nullptr);
      warm = fit_k.beta;
      const OriginalScaleModel model = to_original_scale(train, fit_k.beta);
      total[k] += (val.y - model.predict(val.X)).squaredNorm();
    }
  }
  return total;
}

}  // namespace detail

// Cross-validation score at a single lambda: the partition is drawn from
// rng, so two calls on the same stream state give the same score.
inline double cv_score(const Dataset& ds, const PenaltySpec& penalty,
                       double lambda, int folds, RngStream& rng) {
  const std::vector<double> grid{lambda};
  return detail::cv_path_scores(ds, penalty, grid, folds, rng)[0];
}

// Scores over a whole grid with one shared fold partition.
inline std::vector<double> cv_scores(const Dataset& ds,
                                     const PenaltySpec& penalty,
                                     const std::vector<double>& lambda_grid,
                                     int folds, RngStream& rng) {
  return detail::cv_path_scores(ds, penalty, lambda_grid, folds, rng);
}

struct CriterionSelection {
  Criterion criterion = Criterion::bic;
  double lambda_hat = 0.0;
  int index = 0;
  std::vector<CriterionScore> scores;
};

// Scores every grid lambda under one classical criterion and returns the
// minimizer; score ties go to the larger lambda (the sparser model), which
// on a descending grid is simply the first minimum encountered.
//
// The fitted path may be supplied when the caller already has it (it must
// match the grid); otherwise it is computed here. The kappa criterion has
// its own selection routine and is rejected.
inline CriterionSelection select_lambda_by_criterion(
    const Dataset& ds, const PenaltySpec& penalty,
    const std::vector<double>& lambda_grid, Criterion criterion,
    RngStream& rng, int cv_folds = 10,
    const std::vector<FitResult>* path = nullptr) {
  if (criterion == Criterion::kappa)
    throw ArgumentError(
        "the stability criterion is selected via select_lambda_kappa");
  std::vector<FitResult> own_path;
  if (path == nullptr) {
    own_path = fit_path(ds, penalty, lambda_grid);
    path = &own_path;
  }
  if (path->size() != lambda_grid.size())
    throw ArgumentError("fitted path does not match the lambda grid");

  const int n = static_cast<int>(ds.n());
  double sigma2 = 0.0;
  if (criterion == Criterion::cp) sigma2 = sigma2_saturated(ds);
  std::vector<double> cv_totals;
  if (criterion == Criterion::cv)
    cv_totals = cv_scores(ds, penalty, lambda_grid, cv_folds, rng);

  CriterionSelection sel;
  sel.criterion = criterion;
  sel.scores.reserve(lambda_grid.size());
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    const FitResult& fit_k = (*path)[k];
    CriterionScore row;
    row.criterion = criterion;
    row.lambda = lambda_grid[k];
    row.df_hat = df_hat(fit_k);
    row.sse = sse_of(ds, fit_k.beta);
    switch (criterion) {
      case Criterion::cp:
        row.score = cp_score(row.sse, sigma2, n, row.df_hat);
        break;
      case Criterion::bic:
        row.score = bic_score(row.sse, n, row.df_hat);
        break;
      case Criterion::gcv:
        row.score = gcv_score(row.sse, n, row.df_hat);
        break;
      case Criterion::cv:
        row.score = cv_totals[k];
        break;
      case Criterion::kappa:
        throw ArgumentError("unreachable");
    }
    if (!std::isfinite(row.score))
      throw NumericError("criterion score is non-finite at lambda = " +
                         std::to_string(lambda_grid[k]));
    sel.scores.push_back(row);
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < sel.scores.size(); ++k)
    if (sel.scores[k].score < sel.scores[best].score) best = k;
  sel.index = static_cast<int>(best);
  sel.lambda_hat = lambda_grid[best];
  return sel;
}

}  // namespace stabtune
