#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "stabtune/criteria.hpp"
#include "stabtune/dataset.hpp"
#include "stabtune/error.hpp"
#include "stabtune/penalty.hpp"
#include "stabtune/rng.hpp"
#include "stabtune/solver.hpp"
#include "stabtune/stability.hpp"

namespace stabtune {

// Descending grid of `points` values of 10^e with e equally spaced over
// [lo_exp, hi_exp].
inline std::vector<double> log10_lambda_grid(double lo_exp, double hi_exp,
                                             int points) {
  if (points < 1) throw ArgumentError("grid needs at least one point");
  if (hi_exp < lo_exp)
    throw ArgumentError("grid exponent range is inverted");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  const double denom = points > 1 ? static_cast<double>(points - 1) : 1.0;
  for (int l = points - 1; l >= 0; --l)
    grid.push_back(
        std::pow(10.0, lo_exp + (hi_exp - lo_exp) * static_cast<double>(l) /
                           denom));
  return grid;
}

// The 100-point search grid used throughout the studies:
// {10^(-2 + 4l/99) : l = 0..99}, stored largest first.
inline std::vector<double> default_lambda_grid() {
  return log10_lambda_grid(-2.0, 2.0, 100);
}

struct SimulationConfig {
  int n = 0;
  int p = 0;
  Eigen::VectorXd beta_true;
  double sigma = 1.0;
  double rho = 0.5;
  int replicates = 100;
  std::vector<PenaltyKind> penalties;
  std::vector<Criterion> criteria;
  std::vector<double> lambda_grid;
  int B = 20;
  double alpha = 0.1;
  int cv_folds = 10;
  std::uint64_t seed = 1;
  int scenario = 0;  // 1 or 2 for the named setups, 0 otherwise

  void validate() const {
    if (n < 4) throw ArgumentError("simulation needs n >= 4");
    if (p < 1 || beta_true.size() != p)
      throw ArgumentError("beta_true length must equal p");
    if ((beta_true.array() != 0.0).count() < 1)
      throw ArgumentError("beta_true must have at least one nonzero entry");
    if (!(sigma > 0.0)) throw ArgumentError("sigma must be positive");
    if (!(std::abs(rho) < 1.0)) throw ArgumentError("|rho| must be < 1");
    if (replicates < 1) throw ArgumentError("replicates must be >= 1");
    if (penalties.empty() || criteria.empty())
      throw ArgumentError("at least one penalty and one criterion required");
    if (lambda_grid.empty()) throw ArgumentError("lambda grid is empty");
    if (B < 1) throw ArgumentError("number of splits must be >= 1");
    if (!(alpha >= 0.0 && alpha < 1.0))
      throw ArgumentError("alpha must lie in [0, 1)");
    if (cv_folds < 2) throw ArgumentError("cv_folds must be >= 2");
  }

  int p0() const {
    return static_cast<int>((beta_true.array() != 0.0).count());
  }
};

// Sigma_ij = rho^|i-j| with unit diagonal.
inline Eigen::MatrixXd ar1_covariance(int p, double rho) {
  Eigen::MatrixXd sigma(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      sigma(i, j) = std::pow(rho, std::abs(i - j));
  return sigma;
}

// n i.i.d. rows from N(0, Sigma) with Sigma_ij = rho^|i-j|, via the lower
// Cholesky factor. Draw order is row-major, so the matrix is a pure
// function of the stream state.
inline Eigen::MatrixXd gen_ar1_design(int n, int p, double rho,
                                      RngStream& rng) {
  if (n < 1 || p < 1) throw ArgumentError("design dimensions must be >= 1");
  if (!(std::abs(rho) < 1.0)) throw ArgumentError("|rho| must be < 1");
  const Eigen::LLT<Eigen::MatrixXd> llt(ar1_covariance(p, rho));
  if (llt.info() != Eigen::Success)
    throw NumericError("AR(1) covariance factorization failed");
  const Eigen::MatrixXd chol_l = llt.matrixL();
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd z(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) z(j) = rng.normal();
    x.row(i) = (chol_l * z).transpose();
  }
  return x;
}

// y = X beta + sigma * eps with standard normal noise.
inline Eigen::VectorXd gen_response(const Eigen::MatrixXd& x,
                                    const Eigen::VectorXd& beta_true,
                                    double sigma, RngStream& rng) {
  if (beta_true.size() != x.cols())
    throw ArgumentError("beta_true length does not match the design");
  Eigen::VectorXd y = x * beta_true;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += sigma * rng.normal();
  return y;
}

namespace detail {

inline SimulationConfig base_config() {
  SimulationConfig cfg;
  cfg.sigma = 1.0;
  cfg.rho = 0.5;
  cfg.replicates = 100;
  cfg.penalties = {PenaltyKind::lasso, PenaltyKind::adaptive_lasso,
                   PenaltyKind::scad};
  cfg.criteria = {Criterion::kappa, Criterion::cp, Criterion::bic,
                  Criterion::cv, Criterion::gcv};
  cfg.lambda_grid = default_lambda_grid();
  cfg.B = 20;
  cfg.alpha = 0.1;
  cfg.cv_folds = 10;
  return cfg;
}

}  // namespace detail

// Eight predictors, beta = (3, 1.5, 0, 0, 2, 0, 0, 0), sigma = 1. The
// standard sample sizes are 40, 60, and 80; other n are accepted but
// flagged through `warning`.
inline SimulationConfig scenario1_config(int n, std::string* warning = nullptr) {
  SimulationConfig cfg = detail::base_config();
  cfg.scenario = 1;
  cfg.n = n;
  cfg.p = 8;
  cfg.beta_true = Eigen::VectorXd::Zero(8);
  cfg.beta_true << 3.0, 1.5, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0;
  if (warning != nullptr && n != 40 && n != 60 && n != 80)
    *warning = "n = " + std::to_string(n) +
               " is outside the standard settings {40, 60, 80}";
  cfg.validate();
  return cfg;
}

// Growing dimension: p = round(sqrt(n)) (which gives the standard pairs
// 100 -> 10, 200 -> 14, 400 -> 20, 800 -> 28), beta = (5, 4, 3, 2, 1, 0,
// ..., 0), sigma 1 or 6.
inline SimulationConfig scenario2_config(int n, double sigma,
                                         std::string* warning = nullptr) {
  SimulationConfig cfg = detail::base_config();
  cfg.scenario = 2;
  cfg.n = n;
  cfg.p = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
  if (cfg.p < 5)
    throw ArgumentError("scenario 2 needs round(sqrt(n)) >= 5, got n = " +
                        std::to_string(n));
  cfg.beta_true = Eigen::VectorXd::Zero(cfg.p);
  cfg.beta_true(0) = 5.0;
  cfg.beta_true(1) = 4.0;
  cfg.beta_true(2) = 3.0;
  cfg.beta_true(3) = 2.0;
  cfg.beta_true(4) = 1.0;
  cfg.sigma = sigma;
  if (warning != nullptr && n != 100 && n != 200 && n != 400 && n != 800)
    *warning = "n = " + std::to_string(n) +
               " is outside the standard settings {100, 200, 400, 800}";
  cfg.validate();
  return cfg;
}

struct SelectionQuality {
  bool exact_recovery = false;
  int correct_zeros = 0;
  int incorrect_zeros = 0;
};

// Compares a selection against the true support: correct zeros are true
// zeros left out, incorrect zeros are true signals left out, and exact
// recovery means the active set equals the support.
inline SelectionQuality evaluate_selection(const ActiveSet& active,
                                           const Eigen::VectorXd& beta_true) {
  if (active.p != static_cast<int>(beta_true.size()))
    throw ArgumentError("active set and beta_true sizes differ");
  SelectionQuality q;
  bool equal = true;
  for (int j = 1; j <= active.p; ++j) {
    const bool signal = beta_true(j - 1) != 0.0;
    const bool selected = active.contains(j);
    if (!selected && !signal) ++q.correct_zeros;
    if (!selected && signal) ++q.incorrect_zeros;
    if (selected != signal) equal = false;
  }
  q.exact_recovery = equal;
  return q;
}

// Relative prediction error (beta_hat - beta)' Sigma (beta_hat - beta) /
// sigma^2, using the known generating covariance.
inline double rpe(const Eigen::VectorXd& beta_hat,
                  const Eigen::VectorXd& beta_true,
                  const Eigen::MatrixXd& sigma_x, double sigma) {
  if (beta_hat.size() != beta_true.size() ||
      sigma_x.rows() != beta_true.size() ||
      sigma_x.cols() != beta_true.size())
    throw ArgumentError("rpe inputs have inconsistent dimensions");
  if (!(sigma > 0.0)) throw ArgumentError("sigma must be positive");
  const Eigen::VectorXd d = beta_hat - beta_true;
  return d.dot(sigma_x * d) / (sigma * sigma);
}

// One (penalty, criterion) cell of one replicate. When `error` is nonempty
// the numeric fields are meaningless.
struct ReplicateMetrics {
  int replicate = 0;
  PenaltyKind penalty = PenaltyKind::lasso;
  Criterion criterion = Criterion::kappa;
  double lambda_hat = 0.0;
  bool exact_recovery = false;
  int correct_zeros = 0;
  int incorrect_zeros = 0;
  double rpe = 0.0;
  std::string error;
};

namespace detail {

// Substream keys inside one replicate. Data generation has its own key;
// each (penalty, role) pair gets a distinct key so adding a penalty or
// criterion never shifts the draws of another cell.
inline constexpr std::uint64_t kDataKey = 0;

inline std::uint64_t cell_key(std::size_t penalty_index, int role) {
  return 0x100 + static_cast<std::uint64_t>(penalty_index) * 8 +
         static_cast<std::uint64_t>(role);
}

inline constexpr int kStabilityRole = 1;
inline constexpr int kCvRole = 2;

}  // namespace detail

// Runs every (penalty x criterion) cell on one simulated dataset. The
// dataset and every stochastic step derive from substreams keyed by
// (seed, replicate_index), so a replicate's rows never depend on which
// thread runs it or on how many replicates surround it. Per-cell failures
// are recorded in the row's error field instead of aborting the replicate.
inline std::vector<ReplicateMetrics> run_replicate(
    const SimulationConfig& config, int replicate_index) {
  config.validate();
  RngStream rep =
      RngStream(config.seed).substream(
          static_cast<std::uint64_t>(replicate_index));
  RngStream data_rng = rep.substream(detail::kDataKey);
  const Eigen::MatrixXd x =
      gen_ar1_design(config.n, config.p, config.rho, data_rng);
  const Eigen::VectorXd y =
      gen_response(x, config.beta_true, config.sigma, data_rng);
  const Dataset std_ds = center_and_scale(Dataset::from_raw(y, x), true);
  const Eigen::MatrixXd sigma_x = ar1_covariance(config.p, config.rho);

  std::vector<ReplicateMetrics> rows;
  rows.reserve(config.penalties.size() * config.criteria.size());
  for (std::size_t pi = 0; pi < config.penalties.size(); ++pi) {
    const PenaltyKind kind = config.penalties[pi];

    PenaltySpec spec;
    std::vector<FitResult> path;
    std::string setup_error;
    try {
      switch (kind) {
        case PenaltyKind::lasso: spec = PenaltySpec::lasso(); break;
        case PenaltyKind::adaptive_lasso:
          spec = PenaltySpec::adaptive(adaptive_weights(std_ds));
          break;
        case PenaltyKind::scad: spec = PenaltySpec::scad(); break;
      }
      path = fit_path(std_ds, spec, config.lambda_grid);
    } catch (const Error& e) {
      setup_error = e.what();
    }

    for (const Criterion criterion : config.criteria) {
      ReplicateMetrics row;
      row.replicate = replicate_index;
      row.penalty = kind;
      row.criterion = criterion;
      if (!setup_error.empty()) {
        row.error = setup_error;
        rows.push_back(row);
        continue;
      }
      try {
        int index = 0;
        if (criterion == Criterion::kappa) {
          RngStream stab_rng =
              rep.substream(detail::cell_key(pi, detail::kStabilityRole));
          const StabilityCurve curve = estimate_stability(
              std_ds, spec, config.lambda_grid, config.B, stab_rng);
          const KappaSelection sel = select_lambda_kappa(curve, config.alpha);
          index = sel.index;
          row.lambda_hat = sel.lambda_hat;
        } else {
          RngStream cv_rng =
              rep.substream(detail::cell_key(pi, detail::kCvRole));
          const CriterionSelection sel = select_lambda_by_criterion(
              std_ds, spec, config.lambda_grid, criterion, cv_rng,
              config.cv_folds, &path);
          index = sel.index;
          row.lambda_hat = sel.lambda_hat;
        }
        const ActiveSet& active = path[static_cast<std::size_t>(index)].active;
        const SelectionQuality q = evaluate_selection(active, config.beta_true);
        row.exact_recovery = q.exact_recovery;
        row.correct_zeros = q.correct_zeros;
        row.incorrect_zeros = q.incorrect_zeros;
        const Eigen::VectorXd refit = ols_refit(std_ds, active);
        const OriginalScaleModel model = to_original_scale(std_ds, refit);
        row.rpe = rpe(model.coefficients, config.beta_true, sigma_x,
                      config.sigma);
      } catch (const Error& e) {
        row.error = e.what();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

// Summary of one (penalty, criterion) cell across replicates. Quartiles
// are linear-interpolation quantiles of the error-free rows.
struct AggregateRow {
  PenaltyKind penalty = PenaltyKind::lasso;
  Criterion criterion = Criterion::kappa;
  int n_ok = 0;
  int n_error = 0;
  double pct_true_set = 0.0;
  double mean_correct_zeros = 0.0;
  double mean_incorrect_zeros = 0.0;
  double mean_rpe = 0.0;
  double rpe_q25 = 0.0;
  double rpe_median = 0.0;
  double rpe_q75 = 0.0;
};

// Quantile with linear interpolation between order statistics (the common
// "type 7" rule): h = (k-1) q, result = v[floor(h)] + frac(h) * gap.
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ArgumentError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("q must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] -
                                                       values[lo]);
}

inline std::vector<AggregateRow> aggregate_metrics(
    const SimulationConfig& config, const std::vector<ReplicateMetrics>& rows) {
  std::vector<AggregateRow> out;
  for (const PenaltyKind kind : config.penalties) {
    for (const Criterion criterion : config.criteria) {
      AggregateRow agg;
      agg.penalty = kind;
      agg.criterion = criterion;
      std::vector<double> rpes;
      double sum_exact = 0.0;
      double sum_c = 0.0;
      double sum_i = 0.0;
      for (const ReplicateMetrics& row : rows) {
        if (row.penalty != kind || row.criterion != criterion) continue;
        if (!row.error.empty()) {
          ++agg.n_error;
          continue;
        }
        ++agg.n_ok;
        sum_exact += row.exact_recovery ? 1.0 : 0.0;
        sum_c += row.correct_zeros;
        sum_i += row.incorrect_zeros;
        rpes.push_back(row.rpe);
      }
      if (agg.n_ok > 0) {
        const double nd = static_cast<double>(agg.n_ok);
        agg.pct_true_set = sum_exact / nd;
        agg.mean_correct_zeros = sum_c / nd;
        agg.mean_incorrect_zeros = sum_i / nd;
        agg.mean_rpe =
            std::accumulate(rpes.begin(), rpes.end(), 0.0) / nd;
        agg.rpe_q25 = quantile(rpes, 0.25);
        agg.rpe_median = quantile(rpes, 0.5);
        agg.rpe_q75 = quantile(rpes, 0.75);
      }
      out.push_back(agg);
    }
  }
  return out;
}

struct StudyReport {
  SimulationConfig config;
  std::vector<ReplicateMetrics> rows;
  std::vector<AggregateRow> aggregates;
};

// Runs all replicates, optionally across `jobs` worker threads. Replicates
// are claimed from an atomic counter and written into index-addressed
// slots, then concatenated in index order, so the report is identical for
// every jobs value.
inline StudyReport run_study(const SimulationConfig& config, int jobs = 1) {
  config.validate();
  if (jobs < 1) throw ArgumentError("jobs must be >= 1");
  const int r = config.replicates;
  std::vector<std::vector<ReplicateMetrics>> slots(
      static_cast<std::size_t>(r));

  const int workers = std::min(jobs, r);
  if (workers == 1) {
    for (int i = 0; i < r; ++i) slots[static_cast<std::size_t>(i)] =
        run_replicate(config, i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const int i = next.fetch_add(1);
          if (i >= r) return;
          try {
            slots[static_cast<std::size_t>(i)] = run_replicate(config, i);
          } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  StudyReport report;
  report.config = config;
  for (const auto& slot : slots)
    report.rows.insert(report.rows.end(), slot.begin(), slot.end());
  report.aggregates = aggregate_metrics(config, report.rows);
  return report;
}

struct AlphaSensitivityRow {
  double alpha = 0.0;
  double mean_rpe = 0.0;
};

// Mean RPE of the stability-selected model as a function of alpha, for the
// first configured penalty. The stability curve and the fitted path are
// computed once per replicate and reused for every alpha (the curve does
// not depend on alpha); only the final threshold rule and refit are redone.
// Replicates that fail for any alpha are dropped from every alpha's mean so
// all rows average over the same replicates.
inline std::vector<AlphaSensitivityRow> alpha_sensitivity(
    const SimulationConfig& config, const std::vector<double>& alphas) {
  config.validate();
  if (alphas.empty()) throw ArgumentError("alpha list is empty");
  for (const double a : alphas)
    if (!(a >= 0.0 && a < 1.0))
      throw ArgumentError("alpha values must lie in [0, 1)");
  const PenaltyKind kind = config.penalties.front();
  const std::size_t pi = 0;
  const Eigen::MatrixXd sigma_x = ar1_covariance(config.p, config.rho);

  std::vector<double> sums(alphas.size(), 0.0);
  int n_ok = 0;
  for (int i = 0; i < config.replicates; ++i) {
    RngStream rep =
        RngStream(config.seed).substream(static_cast<std::uint64_t>(i));
    RngStream data_rng = rep.substream(detail::kDataKey);
    const Eigen::MatrixXd x =
        gen_ar1_design(config.n, config.p, config.rho, data_rng);
    const Eigen::VectorXd y =
        gen_response(x, config.beta_true, config.sigma, data_rng);
    const Dataset std_ds = center_and_scale(Dataset::from_raw(y, x), true);
    try {
      PenaltySpec spec;
      switch (kind) {
        case PenaltyKind::lasso: spec = PenaltySpec::lasso(); break;
        case PenaltyKind::adaptive_lasso:
          spec = PenaltySpec::adaptive(adaptive_weights(std_ds));
          break;
        case PenaltyKind::scad: spec = PenaltySpec::scad(); break;
      }
      const std::vector<FitResult> path =
          fit_path(std_ds, spec, config.lambda_grid);
      RngStream stab_rng =
          rep.substream(detail::cell_key(pi, detail::kStabilityRole));
      const StabilityCurve curve = estimate_stability(
          std_ds, spec, config.lambda_grid, config.B, stab_rng);
      std::vector<double> rep_rpe(alphas.size(), 0.0);
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        const KappaSelection sel = select_lambda_kappa(curve, alphas[a]);
        const ActiveSet& active =
            path[static_cast<std::size_t>(sel.index)].active;
        const Eigen::VectorXd refit = ols_refit(std_ds, active);
        const OriginalScaleModel model = to_original_scale(std_ds, refit);
        rep_rpe[a] =
            rpe(model.coefficients, config.beta_true, sigma_x, config.sigma);
      }
      for (std::size_t a = 0; a < alphas.size(); ++a) sums[a] += rep_rpe[a];
      ++n_ok;
    } catch (const Error&) {
      // dropped from every alpha's mean
    }
  }
  if (n_ok == 0)
    throw NumericError("every replicate failed during alpha sensitivity");

  std::vector<AlphaSensitivityRow> out;
  out.reserve(alphas.size());
  for (std::size_t a = 0; a < alphas.size(); ++a)
    out.push_back({alphas[a], sums[a] / static_cast<double>(n_ok)});
  return out;
}

}  // namespace stabtune
