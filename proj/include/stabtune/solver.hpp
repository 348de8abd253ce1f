#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "stabtune/dataset.hpp"
#include "stabtune/error.hpp"
#include "stabtune/penalty.hpp"

namespace stabtune {

// |beta_j| above this counts as active. Coordinate descent produces exact
// zeros for the l1 penalties; the tolerance guards float dust after SCAD
// updates and OLS refits.
inline constexpr double kActivationTolerance = 1e-8;

// A sweep with max absolute coefficient change below this converges.
inline constexpr double kConvergenceTolerance = 1e-7;

inline constexpr int kMaxSweeps = 10000;

// OLS coefficients below kWeightFloor in magnitude get their adaptive
// weight capped at kWeightCap instead of 1/|beta|.
inline constexpr double kWeightFloor = 1e-8;
inline constexpr double kWeightCap = 1e8;

// Indices of the selected variables, 1-based, sorted, duplicate-free,
// drawn from {1, ..., p}.
struct ActiveSet {
  std::vector<int> indices;
  int p = 0;

  static ActiveSet from_beta(const Eigen::VectorXd& beta) {
    ActiveSet a;
    a.p = static_cast<int>(beta.size());
    for (Eigen::Index j = 0; j < beta.size(); ++j)
      if (std::abs(beta(j)) > kActivationTolerance)
        a.indices.push_back(static_cast<int>(j) + 1);
    return a;
  }

  int size() const { return static_cast<int>(indices.size()); }
  bool empty() const { return indices.empty(); }

  bool contains(int j) const {
    return std::binary_search(indices.begin(), indices.end(), j);
  }

  friend bool operator==(const ActiveSet& a, const ActiveSet& b) {
    return a.p == b.p && a.indices == b.indices;
  }
};

// Solution of the penalized problem at one lambda, on the standardized
// scale of the dataset it was fit to.
struct FitResult {
  Eigen::VectorXd beta;
  double lambda = 0.0;
  ActiveSet active;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

// (1/n)||y - X beta||^2 + sum_j p_lambda(|beta_j|).
inline double objective_value(const Dataset& ds, const PenaltySpec& penalty,
                              double lambda, const Eigen::VectorXd& beta) {
  const double nd = static_cast<double>(ds.n());
  double value = (ds.y - ds.X * beta).squaredNorm() / nd;
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    value += penalty_value(penalty, j, lambda, std::abs(beta(j)));
  return value;
}

// max_j |(2/n) x_j'y|: the smallest lambda at which the all-zero vector is
// lasso-stationary.
inline double lambda_max(const Dataset& ds) {
  return (2.0 / static_cast<double>(ds.n())) *
         (ds.X.transpose() * ds.y).cwiseAbs().maxCoeff();
}

namespace detail {

// Scalar minimizer of b^2 - 2zb + p_lambda(|b|) for the clipped penalty,
// valid for gamma > 2 (the quadratic dominates the penalty's concavity, so
// the objective stays strictly convex and the pieces meet continuously at
// |z| = 1.5*lambda and |z| = gamma*lambda).
inline double scad_update(double z, double lambda, double gamma) {
  const double az = std::abs(z);
  if (az <= 1.5 * lambda) return soft_threshold(z, lambda / 2.0);
  if (az <= gamma * lambda) {
    const double mag =
        (2.0 * (gamma - 1.0) * az - gamma * lambda) / (2.0 * gamma - 3.0);
    return z > 0.0 ? mag : -mag;
  }
  return z;
}

inline double coordinate_update(const PenaltySpec& penalty, Eigen::Index j,
                                double z, double lambda) {
  switch (penalty.kind) {
    case PenaltyKind::lasso: return soft_threshold(z, lambda / 2.0);
    case PenaltyKind::adaptive_lasso:
      return soft_threshold(z, lambda * penalty.weights(j) / 2.0);
    case PenaltyKind::scad: return scad_update(z, lambda, penalty.gamma);
  }
  throw ArgumentError("unknown penalty kind");
}

inline std::string format_lambda(double lambda) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", lambda);
  return buf;
}

}  // namespace detail

// Cyclic coordinate descent on the (1/n)-scaled objective. Each coordinate
// update is the exact scalar minimizer under the column normalization
// x_j'x_j = n, which is why the l1 thresholds carry lambda/2: the quadratic
// part contributes b^2 - 2zb with unit curvature.
//
// A null warm start means the zero vector, except for the clipped penalty,
// where descent starts from the lasso solution at the same lambda (the
// problem is non-convex; this picks a reproducible stationary point).
//
// When sweep_objectives is given it receives the objective after every
// sweep, so callers can check descent monotonicity.
inline FitResult fit(const Dataset& ds, const PenaltySpec& penalty,
                     double lambda,
                     const Eigen::VectorXd* warm_start = nullptr,
                     std::vector<double>* sweep_objectives = nullptr) {
  if (!ds.centered || !ds.standardized)
    throw ArgumentError("fit requires a centered and standardized dataset");
  if (lambda < 0.0)
    throw ArgumentError("lambda must be >= 0, got " +
                        detail::format_lambda(lambda));
  const Eigen::Index p = ds.p();
  penalty.validate(p);

  Eigen::VectorXd beta;
  if (warm_start != nullptr) {
    if (warm_start->size() != p)
      throw ArgumentError("warm start length does not match p");
    beta = *warm_start;
  } else if (penalty.kind == PenaltyKind::scad) {
    beta = fit(ds, PenaltySpec::lasso(), lambda).beta;
  } else {
    beta = Eigen::VectorXd::Zero(p);
  }

  const double nd = static_cast<double>(ds.n());
  Eigen::VectorXd r = ds.y - ds.X * beta;

  FitResult result;
  result.lambda = lambda;
  for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double b_old = beta(j);
      const double z = ds.X.col(j).dot(r) / nd + b_old;
      const double b_new = detail::coordinate_update(penalty, j, z, lambda);
      if (b_new != b_old) {
        r -= ds.X.col(j) * (b_new - b_old);
        beta(j) = b_new;
      }
      max_delta = std::max(max_delta, std::abs(b_new - b_old));
    }
    result.iterations = sweep;
    if (!beta.allFinite())
      throw NumericError("coordinate descent diverged at lambda = " +
                         detail::format_lambda(lambda));
    if (sweep_objectives != nullptr)
      sweep_objectives->push_back(objective_value(ds, penalty, lambda, beta));
    if (max_delta < kConvergenceTolerance) {
      result.converged = true;
      break;
    }
  }

  result.beta = std::move(beta);
  result.active = ActiveSet::from_beta(result.beta);
  result.objective = objective_value(ds, penalty, lambda, result.beta);
  if (!std::isfinite(result.objective))
    throw NumericError("objective is non-finite at lambda = " +
                       detail::format_lambda(lambda));
  return result;
}

// Fits along a descending positive grid, warm-starting each solution from
// the previous (larger-lambda) one. A duplicated grid value reuses the
// previous result verbatim, keeping the path exactly continuous there.
inline std::vector<FitResult> fit_path(const Dataset& ds,
                                       const PenaltySpec& penalty,
                                       const std::vector<double>& lambda_grid) {
  if (lambda_grid.empty()) throw ArgumentError("lambda grid is empty");
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] > 0.0))
      throw ArgumentError("lambda grid values must be positive");
    if (k > 0 && lambda_grid[k] > lambda_grid[k - 1])
      throw ArgumentError("lambda grid must be sorted descending");
  }
  std::vector<FitResult> path;
  path.reserve(lambda_grid.size());
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    if (k > 0 && lambda_grid[k] == lambda_grid[k - 1]) {
      path.push_back(path.back());
      continue;
    }
    try {
      const Eigen::VectorXd* warm = k > 0 ? &path.back().beta : nullptr;
      path.push_back(fit(ds, penalty, lambda_grid[k], warm));
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " (path index " +
                         std::to_string(k) + ")");
    }
  }
  return path;
}

// Reciprocal-magnitude weights from the OLS solution on ds. Requires more
// rows than columns and a full-rank design; coefficients smaller than
// kWeightFloor in magnitude get weight kWeightCap.
inline Eigen::VectorXd adaptive_weights(const Dataset& ds) {
  ds.validate();
  if (ds.n() <= ds.p())
    throw DataError("adaptive weights need n > p, got n = " +
                    std::to_string(ds.n()) + ", p = " +
                    std::to_string(ds.p()));
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ds.X);
  if (qr.rank() < ds.p())
    throw DataError("design matrix is rank deficient; adaptive weights "
                    "are unavailable");
  const Eigen::VectorXd ols = qr.solve(ds.y);
  Eigen::VectorXd w(ds.p());
  for (Eigen::Index j = 0; j < ds.p(); ++j)
    w(j) = std::abs(ols(j)) < kWeightFloor ? kWeightCap
                                           : 1.0 / std::abs(ols(j));
  return w;
}

// Unpenalized least squares restricted to the active columns; inactive
// coordinates are exactly zero. An empty active set is the null model.
inline Eigen::VectorXd ols_refit(const Dataset& ds, const ActiveSet& active) {
  ds.validate();
  if (active.p != static_cast<int>(ds.p()))
    throw ArgumentError("active set was built for a different p");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(ds.p());
  if (active.empty()) return beta;
  if (active.size() >= static_cast<int>(ds.n()))
    throw DataError("refit needs fewer active variables than rows");
  Eigen::MatrixXd sub(ds.n(), active.size());
  for (int k = 0; k < active.size(); ++k)
    sub.col(k) = ds.X.col(active.indices[static_cast<std::size_t>(k)] - 1);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
  if (qr.rank() < sub.cols())
    throw DataError("active-column submatrix is singular; refit unavailable");
  const Eigen::VectorXd coef = qr.solve(ds.y);
  for (int k = 0; k < active.size(); ++k)
    beta(active.indices[static_cast<std::size_t>(k)] - 1) = coef(k);
  return beta;
}

// Largest stationarity violation of beta for the given penalty: zero
// coordinates need |(2/n)x_j'r| <= rate_j(0), nonzero ones need
// (2/n)x_j'r = rate_j(|beta_j|) * sign(beta_j).
inline double kkt_violation(const Dataset& ds, const PenaltySpec& penalty,
                            double lambda, const Eigen::VectorXd& beta) {
  penalty.validate(ds.p());
  const double nd = static_cast<double>(ds.n());
  const Eigen::VectorXd r = ds.y - ds.X * beta;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < ds.p(); ++j) {
    const double g = 2.0 * ds.X.col(j).dot(r) / nd;
    const double theta = std::abs(beta(j));
    double violation;
    if (theta <= kActivationTolerance) {
      violation = std::max(0.0, std::abs(g) - penalty_rate(penalty, j, lambda,
                                                           0.0));
    } else {
      const double rate = penalty_rate(penalty, j, lambda, theta);
      violation = std::abs(g - (beta(j) > 0.0 ? rate : -rate));
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

}  // namespace stabtune
