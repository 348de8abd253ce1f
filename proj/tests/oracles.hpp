#pragma once

// Independent reference implementations the test suite checks the library
// against. Everything here is coded from the definitions, not by calling
// the library routines it is meant to verify.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "stabtune/dataset.hpp"
#include "stabtune/penalty.hpp"
#include "stabtune/rng.hpp"
#include "stabtune/solver.hpp"

namespace testsupport {

inline stabtune::ActiveSet mask_active(std::uint32_t mask, int p) {
  stabtune::ActiveSet a;
  a.p = p;
  for (int j = 1; j <= p; ++j)
    if (mask & (1u << (j - 1))) a.indices.push_back(j);
  return a;
}

// Chance-corrected agreement between two subsets of {1..p}, computed as an
// exact reduced rational before the one final division. Agreement on two
// trivial selections (both sets empty, or both full) is defined as -1.
inline double oracle_kappa(std::uint32_t mask1, std::uint32_t mask2, int p) {
  long long n11 = 0, n12 = 0, n21 = 0, n22 = 0;
  for (int j = 0; j < p; ++j) {
    const bool in1 = (mask1 >> j) & 1u;
    const bool in2 = (mask2 >> j) & 1u;
    if (in1 && in2) ++n11;
    else if (in1) ++n12;
    else if (in2) ++n21;
    else ++n22;
  }
  if (n11 == p || n22 == p) return -1.0;
  // Pr(a) = (n11+n22)/p, Pr(e) = ((n11+n12)(n11+n21)+(n12+n22)(n21+n22))/p^2;
  // kappa = (Pr(a) - Pr(e)) / (1 - Pr(e)), over the common denominator p^2.
  const long long pe_num = (n11 + n12) * (n11 + n21) + (n12 + n22) * (n21 + n22);
  long long num = p * (n11 + n22) - pe_num;
  long long den = static_cast<long long>(p) * p - pe_num;
  const long long g = std::gcd(std::abs(num), den);
  if (g > 1) { num /= g; den /= g; }
  return static_cast<double>(num) / static_cast<double>(den);
}

// Penalty terms written out from their definitions.
inline double oracle_penalty(const stabtune::PenaltySpec& spec, int j,
                             double lambda, double theta) {
  using stabtune::PenaltyKind;
  switch (spec.kind) {
    case PenaltyKind::lasso:
      return lambda * theta;
    case PenaltyKind::adaptive_lasso:
      return lambda * spec.weights(j) * theta;
    case PenaltyKind::scad: {
      const double g = spec.gamma;
      if (theta <= lambda) return lambda * theta;
      if (theta <= g * lambda)
        return -(theta * theta - 2.0 * g * lambda * theta + lambda * lambda) /
               (2.0 * (g - 1.0));
      return (g + 1.0) * lambda * lambda / 2.0;
    }
  }
  return 0.0;
}

inline double oracle_objective(const stabtune::Dataset& ds,
                               const stabtune::PenaltySpec& spec,
                               double lambda, const Eigen::VectorXd& beta) {
  double value = (ds.y - ds.X * beta).squaredNorm() /
                 static_cast<double>(ds.n());
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    value += oracle_penalty(spec, static_cast<int>(j), lambda,
                            std::abs(beta(j)));
  return value;
}

// Exhaustive objective minimum over the coefficient grid
// {-halfwidth, ..., -step, 0, step, ..., halfwidth}^p for p <= 3, using a
// precomputed Gram form of the squared error.
inline double grid_best_objective(const stabtune::Dataset& ds,
                                  const stabtune::PenaltySpec& spec,
                                  double lambda, double halfwidth,
                                  double step) {
  const int p = static_cast<int>(ds.p());
  const double nd = static_cast<double>(ds.n());
  const double yty = ds.y.squaredNorm();
  const Eigen::VectorXd c = ds.X.transpose() * ds.y;
  const Eigen::MatrixXd gram = ds.X.transpose() * ds.X;

  const int half = static_cast<int>(std::lround(halfwidth / step));
  const int lo = -half, hi = half;
  auto coef = [step](int k) { return static_cast<double>(k) * step; };

  double best = std::numeric_limits<double>::infinity();
  const int lo2 = p >= 2 ? lo : 0, hi2 = p >= 2 ? hi : 0;
  const int lo3 = p >= 3 ? lo : 0, hi3 = p >= 3 ? hi : 0;
  for (int k1 = lo; k1 <= hi; ++k1) {
    const double b1 = coef(k1);
    const double pen1 = oracle_penalty(spec, 0, lambda, std::abs(b1));
    for (int k2 = lo2; k2 <= hi2; ++k2) {
      const double b2 = coef(k2);
      const double pen2 =
          p >= 2 ? oracle_penalty(spec, 1, lambda, std::abs(b2)) : 0.0;
      for (int k3 = lo3; k3 <= hi3; ++k3) {
        const double b3 = coef(k3);
        double quad = b1 * (b1 * gram(0, 0) - 2.0 * c(0));
        double pen3 = 0.0;
        if (p >= 2)
          quad += b2 * (b2 * gram(1, 1) - 2.0 * c(1)) +
                  2.0 * b1 * b2 * gram(0, 1);
        if (p >= 3) {
          quad += b3 * (b3 * gram(2, 2) - 2.0 * c(2)) +
                  2.0 * b3 * (b1 * gram(0, 2) + b2 * gram(1, 2));
          pen3 = oracle_penalty(spec, 2, lambda, std::abs(b3));
        }
        const double value = (yty + quad) / nd + pen1 + pen2 + pen3;
        if (value < best) best = value;
      }
    }
  }
  return best;
}

// Standardized random regression instance: AR(1)-correlated normal design
// built by explicit convex mixing, sparse signal, gaussian noise.
inline stabtune::Dataset random_instance(stabtune::RngStream& rng, int n,
                                         int p, double rho, double sigma) {
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i) {
    double prev = rng.normal();
    x(i, 0) = prev;
    for (int j = 1; j < p; ++j) {
      prev = rho * prev + std::sqrt(1.0 - rho * rho) * rng.normal();
      x(i, j) = prev;
    }
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  const int signals = 1 + static_cast<int>(rng.uniform_int(
                              static_cast<std::uint64_t>(p)));
  for (int s = 0; s < signals; ++s)
    beta(static_cast<Eigen::Index>(rng.uniform_int(
        static_cast<std::uint64_t>(p)))) = 3.0 * rng.uniform() - 1.5;
  Eigen::VectorXd y = x * beta;
  for (int i = 0; i < n; ++i) y(i) += sigma * rng.normal();
  return stabtune::center_and_scale(stabtune::Dataset::from_raw(y, x), true);
}

}  // namespace testsupport
