#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stabtune/error.hpp"
#include "stabtune/report.hpp"
#include "stabtune/rng.hpp"
#include "stabtune/sim.hpp"

using namespace stabtune;

namespace {

bool rows_equal(const ReplicateMetrics& a, const ReplicateMetrics& b) {
  return a.replicate == b.replicate && a.penalty == b.penalty &&
         a.criterion == b.criterion && a.lambda_hat == b.lambda_hat &&
         a.exact_recovery == b.exact_recovery &&
         a.correct_zeros == b.correct_zeros &&
         a.incorrect_zeros == b.incorrect_zeros && a.rpe == b.rpe &&
         a.error == b.error;
}

SimulationConfig small_config() {
  SimulationConfig cfg = scenario1_config(40);
  cfg.replicates = 6;
  cfg.penalties = {PenaltyKind::lasso};
  cfg.criteria = {Criterion::kappa, Criterion::bic};
  cfg.B = 8;
  cfg.lambda_grid = log10_lambda_grid(-2.0, 2.0, 25);
  cfg.seed = 99;
  return cfg;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("lambda grid is descending with the documented endpoints", "[sim]") {
  const std::vector<double> grid = default_lambda_grid();
  REQUIRE(grid.size() == 100);
  REQUIRE(grid.front() == Catch::Approx(100.0).epsilon(1e-12));
  REQUIRE(grid.back() == Catch::Approx(0.01).epsilon(1e-12));
  REQUIRE(grid[49] ==
          Catch::Approx(std::pow(10.0, -2.0 + 4.0 * 50.0 / 99.0))
              .epsilon(1e-12));
  for (std::size_t k = 1; k < grid.size(); ++k)
    REQUIRE(grid[k] < grid[k - 1]);
}

TEST_CASE("ar1 covariance and sampled design moments", "[sim]") {
  const Eigen::MatrixXd sigma = ar1_covariance(4, 0.5);
  REQUIRE(sigma(0, 0) == 1.0);
  REQUIRE(sigma(0, 1) == 0.5);
  REQUIRE(sigma(0, 3) == 0.125);
  REQUIRE(sigma(3, 1) == 0.25);

  RngStream rng(400);
  const int n = 20000;
  const Eigen::MatrixXd x = gen_ar1_design(n, 4, 0.5, rng);
  const Eigen::MatrixXd centered =
      x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd sample =
      centered.transpose() * centered / static_cast<double>(n - 1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      REQUIRE(sample(i, j) == Catch::Approx(sigma(i, j)).margin(0.03));
}

TEST_CASE("response generation adds the requested noise", "[sim]") {
  RngStream rng(410);
  const Eigen::MatrixXd x = gen_ar1_design(20000, 3, 0.0, rng);
  Eigen::VectorXd beta(3);
  beta << 1.0, 0.0, -2.0;
  const Eigen::VectorXd y = gen_response(x, beta, 1.5, rng);
  const Eigen::VectorXd noise = y - x * beta;
  REQUIRE(noise.mean() == Catch::Approx(0.0).margin(0.05));
  const double var =
      (noise.array() - noise.mean()).square().sum() / (y.size() - 1.0);
  REQUIRE(var == Catch::Approx(2.25).margin(0.08));
}

TEST_CASE("scenario configurations", "[sim]") {
  const SimulationConfig s1 = scenario1_config(40);
  REQUIRE(s1.n == 40);
  REQUIRE(s1.p == 8);
  REQUIRE(s1.p0() == 3);
  REQUIRE(s1.beta_true(0) == 3.0);
  REQUIRE(s1.beta_true(1) == 1.5);
  REQUIRE(s1.beta_true(4) == 2.0);
  REQUIRE(s1.sigma == 1.0);
  REQUIRE(s1.rho == 0.5);
  REQUIRE(s1.B == 20);
  REQUIRE(s1.alpha == 0.1);
  REQUIRE(s1.scenario == 1);

  std::string warning;
  scenario1_config(44, &warning);
  REQUIRE_FALSE(warning.empty());

  const SimulationConfig s2a = scenario2_config(200, 1.0);
  REQUIRE(s2a.p == 14);
  REQUIRE(s2a.p0() == 5);
  REQUIRE(s2a.beta_true(0) == 5.0);
  REQUIRE(s2a.beta_true(4) == 1.0);
  REQUIRE(s2a.beta_true(5) == 0.0);
  REQUIRE(scenario2_config(800, 6.0).p == 28);
  REQUIRE(scenario2_config(800, 6.0).sigma == 6.0);
  REQUIRE_THROWS_AS(scenario2_config(16, 1.0), ArgumentError);
}

TEST_CASE("selection quality against the true support", "[sim]") {
  Eigen::VectorXd beta(8);
  beta << 3.0, 1.5, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0;

  ActiveSet exact;
  exact.p = 8;
  exact.indices = {1, 2, 5};
  const SelectionQuality q1 = evaluate_selection(exact, beta);
  REQUIRE(q1.exact_recovery);
  REQUIRE(q1.correct_zeros == 5);
  REQUIRE(q1.incorrect_zeros == 0);

  ActiveSet under;
  under.p = 8;
  under.indices = {1};
  const SelectionQuality q2 = evaluate_selection(under, beta);
  REQUIRE_FALSE(q2.exact_recovery);
  REQUIRE(q2.correct_zeros == 5);
  REQUIRE(q2.incorrect_zeros == 2);

  ActiveSet over;
  over.p = 8;
  over.indices = {1, 2, 3, 4, 5, 6, 7, 8};
  const SelectionQuality q3 = evaluate_selection(over, beta);
  REQUIRE_FALSE(q3.exact_recovery);
  REQUIRE(q3.correct_zeros == 0);
  REQUIRE(q3.incorrect_zeros == 0);

  ActiveSet wrong;
  wrong.p = 4;
  REQUIRE_THROWS_AS(evaluate_selection(wrong, beta), ArgumentError);
}

TEST_CASE("relative prediction error worked example", "[sim]") {
  Eigen::VectorXd beta_true = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd beta_hat = Eigen::VectorXd::Zero(4);
  beta_hat(0) = 1.0;
  beta_hat(1) = 1.0;
  // (d' Sigma d) with d = (1,1,0,0) and AR(1) rho = 0.5: 1 + 1 + 2*0.5 = 3.
  REQUIRE(rpe(beta_hat, beta_true, ar1_covariance(4, 0.5), 1.0) ==
          Catch::Approx(3.0).epsilon(1e-15));
  REQUIRE(rpe(beta_hat, beta_true, ar1_covariance(4, 0.5), 2.0) ==
          Catch::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("type 7 quantiles", "[sim]") {
  const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
  REQUIRE(quantile(v, 0.0) == 1.0);
  REQUIRE(quantile(v, 1.0) == 4.0);
  REQUIRE(quantile(v, 0.5) == Catch::Approx(2.5));
  REQUIRE(quantile(v, 0.25) == Catch::Approx(1.75));
  REQUIRE(quantile({7.0}, 0.9) == 7.0);
  REQUIRE_THROWS_AS(quantile({}, 0.5), ArgumentError);
  REQUIRE_THROWS_AS(quantile(v, 1.5), ArgumentError);
}

TEST_CASE("replicates are deterministic in (seed, index)", "[sim]") {
  const SimulationConfig cfg = small_config();
  const auto a = run_replicate(cfg, 3);
  const auto b = run_replicate(cfg, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(rows_equal(a[i], b[i]));

  const auto c = run_replicate(cfg, 4);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.size() && i < c.size(); ++i)
    if (a[i].lambda_hat != c[i].lambda_hat || a[i].rpe != c[i].rpe)
      any_difference = true;
  REQUIRE(any_difference);
}

TEST_CASE("study report is invariant to the thread count", "[sim]") {
  const SimulationConfig cfg = small_config();
  const StudyReport serial = run_study(cfg, 1);
  const StudyReport threaded = run_study(cfg, 4);
  REQUIRE(serial.rows.size() == threaded.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i)
    REQUIRE(rows_equal(serial.rows[i], threaded.rows[i]));
  REQUIRE(serial.aggregates.size() == threaded.aggregates.size());
  for (std::size_t i = 0; i < serial.aggregates.size(); ++i) {
    REQUIRE(serial.aggregates[i].pct_true_set ==
            threaded.aggregates[i].pct_true_set);
    REQUIRE(serial.aggregates[i].mean_rpe == threaded.aggregates[i].mean_rpe);
  }
  REQUIRE_THROWS_AS(run_study(cfg, 0), ArgumentError);
}

TEST_CASE("study rows arrive in replicate-major order with all cells",
          "[sim]") {
  SimulationConfig cfg = small_config();
  cfg.replicates = 4;
  cfg.penalties = {PenaltyKind::lasso, PenaltyKind::scad};
  const StudyReport report = run_study(cfg);
  REQUIRE(report.rows.size() == 4u * 2u * 2u);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    REQUIRE(report.rows[i].replicate == static_cast<int>(i / 4));
    if (report.rows[i].error.empty()) {
      REQUIRE(report.rows[i].lambda_hat > 0.0);
      REQUIRE(std::isfinite(report.rows[i].rpe));
    }
  }
}

TEST_CASE("cell failures are recorded per row, not thrown", "[sim]") {
  SimulationConfig cfg = small_config();
  cfg.n = 6;  // below p = 8, so adaptive weights and cp must fail per cell
  cfg.replicates = 2;
  cfg.penalties = {PenaltyKind::lasso, PenaltyKind::adaptive_lasso};
  cfg.criteria = {Criterion::bic, Criterion::cp};
  cfg.cv_folds = 2;
  const StudyReport report = run_study(cfg);
  REQUIRE(report.rows.size() == 2u * 2u * 2u);
  int ada_err = 0, lasso_cp_err = 0;
  for (const ReplicateMetrics& row : report.rows) {
    if (row.penalty == PenaltyKind::adaptive_lasso) {
      REQUIRE_FALSE(row.error.empty());  // weights need n > p
      ++ada_err;
    } else if (row.criterion == Criterion::cp) {
      REQUIRE_FALSE(row.error.empty());  // saturated variance needs n > p
      ++lasso_cp_err;
    }
  }
  REQUIRE(ada_err == 4);
  REQUIRE(lasso_cp_err == 2);

  const auto aggregates = aggregate_metrics(cfg, report.rows);
  for (const AggregateRow& agg : aggregates) {
    if (agg.penalty == PenaltyKind::adaptive_lasso) {
      REQUIRE(agg.n_ok == 0);
      REQUIRE(agg.n_error == 2);
    }
  }
}

TEST_CASE("aggregation summarizes a hand-built cell", "[sim]") {
  SimulationConfig cfg = small_config();
  cfg.penalties = {PenaltyKind::lasso};
  cfg.criteria = {Criterion::bic};
  std::vector<ReplicateMetrics> rows(4);
  for (int i = 0; i < 4; ++i) {
    rows[static_cast<std::size_t>(i)].replicate = i;
    rows[static_cast<std::size_t>(i)].penalty = PenaltyKind::lasso;
    rows[static_cast<std::size_t>(i)].criterion = Criterion::bic;
  }
  rows[0].exact_recovery = true;
  rows[0].correct_zeros = 5;
  rows[0].rpe = 1.0;
  rows[1].exact_recovery = false;
  rows[1].correct_zeros = 4;
  rows[1].incorrect_zeros = 1;
  rows[1].rpe = 3.0;
  rows[2].exact_recovery = true;
  rows[2].correct_zeros = 5;
  rows[2].rpe = 2.0;
  rows[3].error = "synthetic failure";

  const auto aggregates = aggregate_metrics(cfg, rows);
  REQUIRE(aggregates.size() == 1);
  const AggregateRow& agg = aggregates[0];
  REQUIRE(agg.n_ok == 3);
  REQUIRE(agg.n_error == 1);
  REQUIRE(agg.pct_true_set == Catch::Approx(2.0 / 3.0));
  REQUIRE(agg.mean_correct_zeros == Catch::Approx(14.0 / 3.0));
  REQUIRE(agg.mean_incorrect_zeros == Catch::Approx(1.0 / 3.0));
  REQUIRE(agg.mean_rpe == Catch::Approx(2.0));
  REQUIRE(agg.rpe_median == Catch::Approx(2.0));
}

TEST_CASE("alpha sensitivity reuses replicates across alphas", "[sim]") {
  SimulationConfig cfg = small_config();
  cfg.replicates = 4;
  const std::vector<double> alphas{0.02, 0.1, 0.3};
  const auto rows = alpha_sensitivity(cfg, alphas);
  REQUIRE(rows.size() == 3);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    REQUIRE(rows[a].alpha == alphas[a]);
    REQUIRE(std::isfinite(rows[a].mean_rpe));
    REQUIRE(rows[a].mean_rpe >= 0.0);
  }
  const auto again = alpha_sensitivity(cfg, alphas);
  for (std::size_t a = 0; a < rows.size(); ++a)
    REQUIRE(rows[a].mean_rpe == again[a].mean_rpe);

  REQUIRE_THROWS_AS(alpha_sensitivity(cfg, {}), ArgumentError);
  REQUIRE_THROWS_AS(alpha_sensitivity(cfg, {0.5, 1.0}), ArgumentError);
}

TEST_CASE("csv writers escape, terminate, and round-trip", "[report]") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "stabtune_report_test";
  fs::create_directories(dir);

  REQUIRE(format_double(0.1) == "0.10000000000000001");
  REQUIRE(format_double(1.0) == "1");
  REQUIRE(csv_escape("plain") == "plain");
  REQUIRE(csv_escape("a,b") == "\"a,b\"");
  REQUIRE(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");

  const fs::path table = dir / "table.csv";
  write_csv(table.string(), {"a", "b"}, {{"1", "x,y"}, {"2", "z"}});
  REQUIRE(slurp(table) == "a,b\n1,\"x,y\"\n2,z\n");
  REQUIRE_THROWS_AS(write_csv(table.string(), {"a"}, {{"1", "2"}}),
                    ArgumentError);

  SimulationConfig cfg = small_config();
  cfg.replicates = 3;
  const StudyReport report = run_study(cfg);
  const fs::path reps = dir / "replicates.csv";
  const fs::path aggs = dir / "aggregates.csv";
  write_replicates_csv(reps.string(), report.rows);
  write_aggregates_csv(aggs.string(), report.aggregates);

  const std::string reps_text = slurp(reps);
  REQUIRE(reps_text.rfind("replicate,penalty,criterion,lambda_hat", 0) == 0);
  REQUIRE(reps_text.find("\r") == std::string::npos);
  REQUIRE(std::count(reps_text.begin(), reps_text.end(), '\n') ==
          1 + static_cast<long>(report.rows.size()));
  const std::string aggs_text = slurp(aggs);
  REQUIRE(aggs_text.find("pct_true_set") != std::string::npos);
  REQUIRE(aggs_text.find("lasso,kappa") != std::string::npos);

  // Error rows leave the numeric fields blank.
  std::vector<ReplicateMetrics> rows(1);
  rows[0].error = "went wrong";
  write_replicates_csv(reps.string(), rows);
  REQUIRE(slurp(reps).find(",,,,,went wrong") != std::string::npos);

  StabilityCurve curve;
  curve.lambda_grid = {1.0, 0.5};
  curve.s_hat = {0.9, 0.4};
  const fs::path curve_path = dir / "curve.csv";
  write_stability_curve_csv(curve_path.string(), curve);
  const std::string curve_text = slurp(curve_path);
  REQUIRE(curve_text.rfind("lambda,s_hat", 0) == 0);
  REQUIRE(curve_text.find(format_double(0.9)) != std::string::npos);

  fs::remove_all(dir);
}
