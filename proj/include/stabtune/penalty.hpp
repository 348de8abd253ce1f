#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "stabtune/error.hpp"

namespace stabtune {

enum class PenaltyKind { lasso, adaptive_lasso, scad };

inline const char* to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::lasso: return "lasso";
    case PenaltyKind::adaptive_lasso: return "adalasso";
    case PenaltyKind::scad: return "scad";
  }
  throw ArgumentError("unknown penalty kind");
}

inline PenaltyKind penalty_from_string(const std::string& name) {
  if (name == "lasso") return PenaltyKind::lasso;
  if (name == "adalasso") return PenaltyKind::adaptive_lasso;
  if (name == "scad") return PenaltyKind::scad;
  throw ArgumentError("unknown penalty '" + name +
                      "' (expected lasso, adalasso, or scad)");
}

// Concavity parameter of the smoothly clipped penalty; must exceed 2 for
// the coordinate-wise minimizer to stay single-valued.
inline constexpr double kScadDefaultGamma = 3.7;

// A penalty family instance. The weights vector is only meaningful for the
// adaptive form and must then have one entry per predictor; gamma is only
// meaningful for the clipped form.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::lasso;
  double gamma = kScadDefaultGamma;
  Eigen::VectorXd weights;

  static PenaltySpec lasso() { return {}; }

  static PenaltySpec adaptive(Eigen::VectorXd w) {
    PenaltySpec spec;
    spec.kind = PenaltyKind::adaptive_lasso;
    spec.weights = std::move(w);
    return spec;
  }

  static PenaltySpec scad(double gamma = kScadDefaultGamma) {
    PenaltySpec spec;
    spec.kind = PenaltyKind::scad;
    spec.gamma = gamma;
    return spec;
  }

  void validate(Eigen::Index p) const {
    if (kind == PenaltyKind::adaptive_lasso) {
      if (weights.size() != p)
        throw ArgumentError("adaptive weights length " +
                            std::to_string(weights.size()) +
                            " does not match p = " + std::to_string(p));
      if ((weights.array() <= 0.0).any() || !weights.allFinite())
        throw ArgumentError("adaptive weights must be positive and finite");
    }
    if (kind == PenaltyKind::scad && !(gamma > 2.0))
      throw ArgumentError("scad gamma must exceed 2, got " +
                          std::to_string(gamma));
  }
};

// sign(z) * max(|z| - t, 0).
inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// Derivative of the clipped penalty at theta >= 0: constant lambda up to
// lambda, then decaying linearly to 0 at gamma*lambda.
inline double scad_derivative(double theta, double lambda, double gamma) {
  if (theta < 0.0) throw ArgumentError("scad derivative needs theta >= 0");
  if (theta <= lambda) return lambda;
  const double clipped = std::max(gamma * lambda - theta, 0.0);
  return clipped / (gamma - 1.0);
}

// The clipped penalty itself (integral of scad_derivative from 0).
inline double scad_penalty(double theta, double lambda, double gamma) {
  if (theta < 0.0) throw ArgumentError("scad penalty needs theta >= 0");
  if (theta <= lambda) return lambda * theta;
  if (theta <= gamma * lambda)
    return (2.0 * gamma * lambda * theta - theta * theta - lambda * lambda) /
           (2.0 * (gamma - 1.0));
  return lambda * lambda * (gamma + 1.0) / 2.0;
}

// Penalty contribution of one coefficient at magnitude theta = |beta_j|.
inline double penalty_value(const PenaltySpec& spec, Eigen::Index j,
                            double lambda, double theta) {
  switch (spec.kind) {
    case PenaltyKind::lasso: return lambda * theta;
    case PenaltyKind::adaptive_lasso: return lambda * spec.weights(j) * theta;
    case PenaltyKind::scad: return scad_penalty(theta, lambda, spec.gamma);
  }
  throw ArgumentError("unknown penalty kind");
}

// Stationarity rate for coordinate j at magnitude theta: the subgradient
// bound the residual correlation is compared against.
inline double penalty_rate(const PenaltySpec& spec, Eigen::Index j,
                           double lambda, double theta) {
  switch (spec.kind) {
    case PenaltyKind::lasso: return lambda;
    case PenaltyKind::adaptive_lasso: return lambda * spec.weights(j);
    case PenaltyKind::scad: return scad_derivative(theta, lambda, spec.gamma);
  }
  throw ArgumentError("unknown penalty kind");
}

}  // namespace stabtune
