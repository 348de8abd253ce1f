// Minimal walkthrough: simulate one dataset, estimate the stability curve
// for the lasso path, and print the selected lambda next to the BIC choice.

#include <cstdio>

#include "stabtune/stabtune.hpp"

int main() {
  using namespace stabtune;

  const SimulationConfig cfg = scenario1_config(60);
  RngStream rng(20240817);
  const Eigen::MatrixXd x = gen_ar1_design(cfg.n, cfg.p, cfg.rho, rng);
  const Eigen::VectorXd y = gen_response(x, cfg.beta_true, cfg.sigma, rng);
  const Dataset ds = center_and_scale(Dataset::from_raw(y, x), true);

  const std::vector<double> grid = default_lambda_grid();
  const StabilityCurve curve =
      [&] {
        RngStream stab_rng = rng.substream(1);
        return estimate_stability(ds, PenaltySpec::lasso(), grid, cfg.B,
                                  stab_rng);
      }();
  const KappaSelection kappa_sel = select_lambda_kappa(curve, cfg.alpha);

  RngStream cv_rng = rng.substream(2);
  const CriterionSelection bic_sel = select_lambda_by_criterion(
      ds, PenaltySpec::lasso(), grid, Criterion::bic, cv_rng);

  std::printf("stability-selected lambda: %.4f\n", kappa_sel.lambda_hat);
  std::printf("bic-selected lambda:       %.4f\n", bic_sel.lambda_hat);

  const std::vector<FitResult> path = fit_path(ds, PenaltySpec::lasso(), grid);
  const auto print_active = [&](const char* label, int index) {
    std::printf("%s active set:", label);
    for (const int j : path[static_cast<std::size_t>(index)].active.indices)
      std::printf(" x%d", j);
    std::printf("\n");
  };
  print_active("stability", kappa_sel.index);
  print_active("bic", bic_sel.index);

  std::printf("\nlambda vs s_hat (every 10th grid point):\n");
  for (std::size_t l = 0; l < grid.size(); l += 10)
    std::printf("  %8.4f  %+.3f\n", grid[l], curve.s_hat[l]);
  return 0;
}
