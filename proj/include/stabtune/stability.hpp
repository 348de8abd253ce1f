#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "stabtune/dataset.hpp"
#include "stabtune/error.hpp"
#include "stabtune/penalty.hpp"
#include "stabtune/rng.hpp"
#include "stabtune/solver.hpp"

namespace stabtune {

// Agreement table between two selections over the same p variables:
// n11 = both select, n12 = only the first, n21 = only the second,
// n22 = neither. The four counts sum to p.
struct KappaInputs {
  int n11 = 0;
  int n12 = 0;
  int n21 = 0;
  int n22 = 0;
};

inline KappaInputs kappa_counts(const ActiveSet& a1, const ActiveSet& a2) {
  if (a1.p != a2.p)
    throw ArgumentError("active sets are over different numbers of variables");
  KappaInputs c;
  for (int j = 1; j <= a1.p; ++j) {
    const bool in1 = a1.contains(j);
    const bool in2 = a2.contains(j);
    if (in1 && in2) ++c.n11;
    else if (in1) ++c.n12;
    else if (in2) ++c.n21;
    else ++c.n22;
  }
  return c;
}

// Cohen's kappa between two active sets:
//   (Pr(a) - Pr(e)) / (1 - Pr(e)),
// Pr(a) = (n11+n22)/p, Pr(e) = ((n11+n12)(n11+n21) + (n12+n22)(n21+n22))/p^2.
// Both trivial selections agreeing (both empty, or both full) carry no
// information and are defined as -1. The value is computed as a ratio of
// exact integers with a single final division, so equal inputs always give
// bit-equal outputs.
inline double kappa(const ActiveSet& a1, const ActiveSet& a2) {
  if (a1.p < 2) throw ArgumentError("kappa needs p >= 2");
  const KappaInputs c = kappa_counts(a1, a2);
  const long long p = a1.p;
  if (c.n11 == p || c.n22 == p) return -1.0;
  const long long s =
      static_cast<long long>(c.n11 + c.n12) * (c.n11 + c.n21) +
      static_cast<long long>(c.n12 + c.n22) * (c.n21 + c.n22);
  // numerator = p^2 (Pr(a) - Pr(e)), denominator = p^2 (1 - Pr(e)); the
  // denominator is 0 only for the degenerate pairs handled above.
  const long long num = p * (c.n11 + c.n22) - s;
  const long long den = p * p - s;
  return static_cast<double>(num) / static_cast<double>(den);
}

// Per-lambda selection stability estimated from B random half-splits:
// per_split_kappa(b, l) is the agreement between the two half-sample
// selections of split b at lambda_grid[l], and s_hat is its column mean.
struct StabilityCurve {
  std::vector<double> lambda_grid;
  std::vector<double> s_hat;
  Eigen::MatrixXd per_split_kappa;  // B rows, |lambda_grid| columns
  int B = 0;
  int m = 0;  // rows per half
};

// Runs the half-splitting scheme: B times, partition the rows into two
// halves, run the full fitting pipeline on each half separately (centering,
// standardization, and adaptive weights are all recomputed per half), and
// record the kappa agreement of the two selection paths.
//
// One value is drawn from rng as the base seed and each split works on its
// own substream keyed by split index, so results do not depend on how the
// splits are scheduled, while successive calls on the same stream still see
// fresh randomness.
inline StabilityCurve estimate_stability(const Dataset& ds,
                                         const PenaltySpec& penalty,
                                         const std::vector<double>& lambda_grid,
                                         int B, RngStream& rng) {
  if (B < 1) throw ArgumentError("number of splits must be >= 1");
  if (lambda_grid.empty()) throw ArgumentError("lambda grid is empty");
  ds.validate();

  StabilityCurve curve;
  curve.lambda_grid = lambda_grid;
  curve.B = B;
  curve.per_split_kappa.resize(B, static_cast<Eigen::Index>(lambda_grid.size()));

  RngStream base(rng.next_u64());
  for (int b = 0; b < B; ++b) {
    RngStream split_rng = base.substream(static_cast<std::uint64_t>(b));
    try {
      const SplitPair split = random_half_split(ds, split_rng);
      curve.m = split.m;
      const auto path_of = [&](const Dataset& half_raw) {
        const Dataset half = center_and_scale(half_raw, true);
        PenaltySpec half_penalty = penalty;
        if (penalty.kind == PenaltyKind::adaptive_lasso)
          half_penalty.weights = adaptive_weights(half);
        return fit_path(half, half_penalty, lambda_grid);
      };
      const std::vector<FitResult> path1 = path_of(split.first);
      const std::vector<FitResult> path2 = path_of(split.second);
      for (std::size_t l = 0; l < lambda_grid.size(); ++l)
        curve.per_split_kappa(b, static_cast<Eigen::Index>(l)) =
            kappa(path1[l].active, path2[l].active);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " (split " +
                         std::to_string(b + 1) + " of " + std::to_string(B) +
                         ")");
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + " (split " +
                      std::to_string(b + 1) + " of " + std::to_string(B) +
                      ")");
    }
  }

  curve.s_hat.resize(lambda_grid.size());
  for (std::size_t l = 0; l < lambda_grid.size(); ++l)
    curve.s_hat[l] =
        curve.per_split_kappa.col(static_cast<Eigen::Index>(l)).mean();
  return curve;
}

// The stability-based choice of lambda and the curve it came from.
struct KappaSelection {
  double lambda_hat = 0.0;
  int index = 0;  // position of lambda_hat in curve.lambda_grid
  double alpha = 0.0;
  double s_max = 0.0;
  StabilityCurve curve;
};

// Picks the smallest grid lambda whose stability is within a factor
// 1 - alpha of the curve's maximum. The grid is descending, so the scan
// runs from the back. A non-positive maximum means no lambda produced any
// stable selection and the ratio rule is ill-posed; that is surfaced as an
// error rather than silently falling back to the argmax.
inline KappaSelection select_lambda_kappa(const StabilityCurve& curve,
                                          double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw ArgumentError("alpha must lie in [0, 1), got " +
                        std::to_string(alpha));
  if (curve.s_hat.empty() ||
      curve.s_hat.size() != curve.lambda_grid.size())
    throw ArgumentError("stability curve is empty or inconsistent");

  KappaSelection sel;
  sel.alpha = alpha;
  sel.s_max = *std::max_element(curve.s_hat.begin(), curve.s_hat.end());
  if (!(sel.s_max > 0.0))
    throw NumericError(
        "no stable model: the maximum estimated stability is not positive");
  for (std::size_t l = curve.s_hat.size(); l-- > 0;) {
    if (curve.s_hat[l] / sel.s_max >= 1.0 - alpha) {
      sel.index = static_cast<int>(l);
      sel.lambda_hat = curve.lambda_grid[l];
      sel.curve = curve;
      return sel;
    }
  }
  // The maximum itself always satisfies the ratio rule.
  throw NumericError("stability ratio rule matched no grid point");
}

}  // namespace stabtune
