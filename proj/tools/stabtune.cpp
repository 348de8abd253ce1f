// Command-line front end: tune a penalty level on user data, run the
// simulation studies, sweep the stability threshold alpha, and run the
// train/test workflow on a real dataset. Every command writes CSV outputs
// plus a manifest.json sufficient to reproduce them byte-for-byte.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stabtune/stabtune.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct TuneOpts {
  std::string data;
  std::string response;
  std::string penalty = "lasso";
  std::string criterion = "kappa";
  double alpha = 0.1;
  int splits = 20;
  double grid_min = -2.0;
  double grid_max = 2.0;
  int grid_points = 100;
  std::uint64_t seed = 1;
  std::string out = ".";
};

struct SimulateOpts {
  int scenario = 1;
  int n = 0;
  double sigma = 1.0;
  int replicates = 100;
  std::vector<std::string> penalties;
  std::vector<std::string> criteria;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out = ".";
};

struct SensitivityOpts {
  int scenario = 1;
  int n = 0;
  double sigma = 1.0;
  std::string alphas = "0:0.30:0.01";
  std::string penalty = "lasso";
  int replicates = 100;
  std::uint64_t seed = 1;
  std::string out = ".";
};

struct RealdataOpts {
  std::string data;
  std::string response;
  int train_size = 67;
  std::string split_column;
  std::uint64_t seed = 1;
  std::string out = ".";
};

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw stabtune::DataError("cannot create output directory '" + out + "'");
  return dir;
}

// "a:b:step" (inclusive range) or a comma-separated list.
std::vector<double> parse_alphas(const std::string& text) {
  const auto parse_one = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw stabtune::ArgumentError("malformed alpha value '" + s + "' in '" +
                                    text + "'");
    }
  };
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(sep, pos);
    parts.push_back(text.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  std::vector<double> alphas;
  if (sep == ':') {
    if (parts.size() != 3)
      throw stabtune::ArgumentError("alpha range must look like a:b:step, "
                                    "got '" + text + "'");
    const double a = parse_one(parts[0]);
    const double b = parse_one(parts[1]);
    const double step = parse_one(parts[2]);
    if (!(step > 0.0) || b < a)
      throw stabtune::ArgumentError("alpha range '" + text +
                                    "' needs step > 0 and b >= a");
    for (int k = 0;; ++k) {
      const double v = a + step * k;
      if (v > b + 1e-12) break;
      alphas.push_back(v);
    }
  } else {
    for (const auto& part : parts)
      if (!part.empty()) alphas.push_back(parse_one(part));
  }
  if (alphas.empty())
    throw stabtune::ArgumentError("no alpha values in '" + text + "'");
  for (const double a : alphas)
    if (!(a >= 0.0 && a < 1.0))
      throw stabtune::ArgumentError("alpha values must lie in [0, 1), got " +
                                    std::to_string(a));
  return alphas;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const ordered_json& arguments,
                    const std::vector<std::string>& argv, std::uint64_t seed,
                    const std::vector<std::string>& outputs,
                    double wall_seconds) {
  ordered_json m;
  m["command"] = command;
  m["arguments"] = arguments;
  m["argv"] = argv;
  m["seed"] = seed;
  m["version"] = stabtune::kVersion;
  m["outputs"] = outputs;
  m["wall_seconds"] = wall_seconds;
  const fs::path path = dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw stabtune::DataError("cannot write '" + path.string() + "'");
  out << m.dump(2) << "\n";
}

std::string fmt(double x) { return stabtune::format_double(x); }

stabtune::PenaltySpec make_spec(stabtune::PenaltyKind kind,
                                const stabtune::Dataset& std_ds) {
  switch (kind) {
    case stabtune::PenaltyKind::lasso: return stabtune::PenaltySpec::lasso();
    case stabtune::PenaltyKind::adaptive_lasso:
      return stabtune::PenaltySpec::adaptive(
          stabtune::adaptive_weights(std_ds));
    case stabtune::PenaltyKind::scad: return stabtune::PenaltySpec::scad();
  }
  throw stabtune::ArgumentError("unknown penalty kind");
}

int cmd_tune(const TuneOpts& opts) {
  using namespace stabtune;
  const auto started = std::chrono::steady_clock::now();
  const fs::path dir = ensure_out_dir(opts.out);

  const Dataset raw = load_csv(opts.data, opts.response);
  const Dataset std_ds = center_and_scale(raw, true);
  const std::vector<double> grid =
      log10_lambda_grid(opts.grid_min, opts.grid_max, opts.grid_points);
  const PenaltyKind kind = penalty_from_string(opts.penalty);
  const Criterion criterion = criterion_from_string(opts.criterion);
  const PenaltySpec spec = make_spec(kind, std_ds);

  RngStream rng(opts.seed);
  const std::vector<FitResult> path = fit_path(std_ds, spec, grid);

  double lambda_hat = 0.0;
  int index = 0;
  if (criterion == Criterion::kappa) {
    const StabilityCurve curve =
        estimate_stability(std_ds, spec, grid, opts.splits, rng);
    const KappaSelection sel = select_lambda_kappa(curve, opts.alpha);
    lambda_hat = sel.lambda_hat;
    index = sel.index;
    write_stability_curve_csv((dir / "curve.csv").string(), curve);
  } else {
    const CriterionSelection sel = select_lambda_by_criterion(
        std_ds, spec, grid, criterion, rng, 10, &path);
    lambda_hat = sel.lambda_hat;
    index = sel.index;
    write_criterion_curve_csv((dir / "curve.csv").string(), sel.scores);
  }

  const ActiveSet& active = path[static_cast<std::size_t>(index)].active;
  const Eigen::VectorXd refit = ols_refit(std_ds, active);
  const OriginalScaleModel model = to_original_scale(std_ds, refit);

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"(intercept)", fmt(model.intercept), ""});
  for (Eigen::Index j = 0; j < std_ds.p(); ++j)
    rows.push_back({std_ds.column_names[static_cast<std::size_t>(j)],
                    fmt(model.coefficients(j)),
                    active.contains(static_cast<int>(j) + 1) ? "1" : "0"});
  write_csv((dir / "selection.csv").string(),
            {"term", "coefficient", "in_active_set"}, rows);

  std::vector<std::string> active_names;
  for (const int j : active.indices)
    active_names.push_back(std_ds.column_names[static_cast<std::size_t>(j - 1)]);
  std::printf("lambda_hat = %s\n", fmt(lambda_hat).c_str());
  std::printf("active set (%d of %d): {%s}\n", active.size(),
              static_cast<int>(std_ds.p()),
              join(active_names, ", ").c_str());

  ordered_json args;
  args["data"] = opts.data;
  args["response"] = opts.response;
  args["penalty"] = opts.penalty;
  args["criterion"] = opts.criterion;
  args["alpha"] = opts.alpha;
  args["splits"] = opts.splits;
  args["grid_min"] = opts.grid_min;
  args["grid_max"] = opts.grid_max;
  args["grid_points"] = opts.grid_points;
  args["seed"] = opts.seed;
  args["out"] = opts.out;
  const std::vector<std::string> argv = {
      "tune",        "--data",        opts.data,
      "--response",  opts.response,   "--penalty",
      opts.penalty,  "--criterion",   opts.criterion,
      "--alpha",     fmt(opts.alpha), "--splits",
      std::to_string(opts.splits),    "--grid-min",
      fmt(opts.grid_min),             "--grid-max",
      fmt(opts.grid_max),             "--grid-points",
      std::to_string(opts.grid_points),
      "--seed",      std::to_string(opts.seed),
      "--out",       opts.out};
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  write_manifest(dir, "tune", args, argv, opts.seed,
                 {"curve.csv", "selection.csv"}, wall);
  return 0;
}

stabtune::SimulationConfig build_scenario_config(int scenario, int n,
                                                 double sigma) {
  std::string warning;
  stabtune::SimulationConfig cfg;
  if (scenario == 1) {
    cfg = stabtune::scenario1_config(n, &warning);
    cfg.sigma = sigma;
  } else {
    cfg = stabtune::scenario2_config(n, sigma, &warning);
  }
  cfg.validate();
  if (!warning.empty()) std::fprintf(stderr, "warning: %s\n", warning.c_str());
  return cfg;
}

int cmd_simulate(const SimulateOpts& opts) {
  using namespace stabtune;
  const auto started = std::chrono::steady_clock::now();
  const fs::path dir = ensure_out_dir(opts.out);

  SimulationConfig cfg = build_scenario_config(opts.scenario, opts.n,
                                               opts.sigma);
  cfg.replicates = opts.replicates;
  cfg.seed = opts.seed;
  if (!opts.penalties.empty()) {
    cfg.penalties.clear();
    for (const auto& name : opts.penalties)
      cfg.penalties.push_back(penalty_from_string(name));
  }
  if (!opts.criteria.empty()) {
    cfg.criteria.clear();
    for (const auto& name : opts.criteria)
      cfg.criteria.push_back(criterion_from_string(name));
  }
  cfg.validate();
  if (opts.jobs < 1)
    throw ArgumentError("--jobs must be >= 1, got " +
                        std::to_string(opts.jobs));

  const StudyReport report = run_study(cfg, opts.jobs);
  write_replicates_csv((dir / "replicates.csv").string(), report.rows);
  write_aggregates_csv((dir / "aggregates.csv").string(), report.aggregates);

  for (const AggregateRow& a : report.aggregates)
    std::printf("%-8s %-5s true-set %.2f  C %.2f  I %.2f  median RPE %.3f%s\n",
                to_string(a.penalty), to_string(a.criterion), a.pct_true_set,
                a.mean_correct_zeros, a.mean_incorrect_zeros, a.rpe_median,
                a.n_error > 0
                    ? ("  (" + std::to_string(a.n_error) + " errors)").c_str()
                    : "");

  std::vector<std::string> penalty_names;
  for (const PenaltyKind k : cfg.penalties) penalty_names.push_back(to_string(k));
  std::vector<std::string> criterion_names;
  for (const Criterion c : cfg.criteria) criterion_names.push_back(to_string(c));

  ordered_json args;
  args["scenario"] = opts.scenario;
  args["n"] = cfg.n;
  args["p"] = cfg.p;
  args["sigma"] = cfg.sigma;
  args["rho"] = cfg.rho;
  args["replicates"] = cfg.replicates;
  args["penalties"] = penalty_names;
  args["criteria"] = criterion_names;
  args["splits"] = cfg.B;
  args["alpha"] = cfg.alpha;
  args["cv_folds"] = cfg.cv_folds;
  args["seed"] = cfg.seed;
  args["jobs"] = opts.jobs;
  args["out"] = opts.out;
  std::vector<std::string> argv = {"simulate",
                                   "--scenario",
                                   std::to_string(opts.scenario),
                                   "--n",
                                   std::to_string(opts.n),
                                   "--sigma",
                                   fmt(opts.sigma),
                                   "--replicates",
                                   std::to_string(opts.replicates)};
  for (const auto& name : penalty_names) {
    argv.push_back("--penalties");
    argv.push_back(name);
  }
  for (const auto& name : criterion_names) {
    argv.push_back("--criteria");
    argv.push_back(name);
  }
  argv.insert(argv.end(), {"--seed", std::to_string(opts.seed), "--jobs",
                           std::to_string(opts.jobs), "--out", opts.out});
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  write_manifest(dir, "simulate", args, argv, cfg.seed,
                 {"replicates.csv", "aggregates.csv"}, wall);
  return 0;
}

int cmd_sensitivity(const SensitivityOpts& opts) {
  using namespace stabtune;
  const auto started = std::chrono::steady_clock::now();
  const fs::path dir = ensure_out_dir(opts.out);

  const std::vector<double> alphas = parse_alphas(opts.alphas);
  SimulationConfig cfg = build_scenario_config(opts.scenario, opts.n,
                                               opts.sigma);
  cfg.replicates = opts.replicates;
  cfg.seed = opts.seed;
  cfg.penalties = {penalty_from_string(opts.penalty)};
  cfg.validate();

  const std::vector<AlphaSensitivityRow> rows = alpha_sensitivity(cfg, alphas);
  write_alpha_csv((dir / "alpha_rpe.csv").string(), rows);
  for (const AlphaSensitivityRow& r : rows)
    std::printf("alpha %.4f  mean RPE %.4f\n", r.alpha, r.mean_rpe);

  ordered_json args;
  args["scenario"] = opts.scenario;
  args["n"] = cfg.n;
  args["sigma"] = cfg.sigma;
  args["alphas"] = opts.alphas;
  args["penalty"] = opts.penalty;
  args["replicates"] = cfg.replicates;
  args["seed"] = cfg.seed;
  args["out"] = opts.out;
  const std::vector<std::string> argv = {
      "sensitivity", "--scenario", std::to_string(opts.scenario),
      "--n",         std::to_string(opts.n),
      "--sigma",     fmt(opts.sigma),
      "--alphas",    opts.alphas,
      "--penalty",   opts.penalty,
      "--replicates", std::to_string(opts.replicates),
      "--seed",      std::to_string(opts.seed),
      "--out",       opts.out};
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  write_manifest(dir, "sensitivity", args, argv, cfg.seed, {"alpha_rpe.csv"},
                 wall);
  return 0;
}

int cmd_realdata(const RealdataOpts& opts) {
  using namespace stabtune;
  const auto started = std::chrono::steady_clock::now();
  const fs::path dir = ensure_out_dir(opts.out);

  RngStream master(opts.seed);
  Dataset train_raw;
  Dataset test_raw;
  if (!opts.split_column.empty()) {
    auto split = load_csv_split(opts.data, opts.response, opts.split_column);
    train_raw = std::move(split.first);
    test_raw = std::move(split.second);
  } else {
    const Dataset all = load_csv(opts.data, opts.response);
    RngStream split_rng = master.substream(0);
    auto split = train_test_split(all, opts.train_size, split_rng);
    train_raw = std::move(split.first);
    test_raw = std::move(split.second);
  }
  const Dataset train = center_and_scale(train_raw, true);
  const std::vector<double> grid = default_lambda_grid();
  const int splits = 20;
  const double alpha = 0.1;

  const std::vector<PenaltyKind> penalties = {
      PenaltyKind::lasso, PenaltyKind::adaptive_lasso, PenaltyKind::scad};
  const std::vector<Criterion> criteria = {Criterion::kappa, Criterion::cp,
                                           Criterion::bic, Criterion::cv,
                                           Criterion::gcv};

  std::vector<std::vector<std::string>> rows;
  std::printf("train %d rows, test %d rows, %d predictors\n",
              static_cast<int>(train.n()), static_cast<int>(test_raw.n()),
              static_cast<int>(train.p()));
  for (std::size_t pi = 0; pi < penalties.size(); ++pi) {
    const PenaltyKind kind = penalties[pi];
    PenaltySpec spec;
    std::vector<FitResult> path;
    std::string setup_error;
    try {
      spec = make_spec(kind, train);
      path = fit_path(train, spec, grid);
    } catch (const Error& e) {
      setup_error = e.what();
    }
    for (const Criterion criterion : criteria) {
      if (!setup_error.empty()) {
        rows.push_back({to_string(kind), to_string(criterion), "", "", "", "",
                        "", setup_error});
        continue;
      }
      try {
        int index = 0;
        double lambda_hat = 0.0;
        if (criterion == Criterion::kappa) {
          RngStream stab_rng = master.substream(0x100 + pi * 8 + 1);
          const StabilityCurve curve =
              estimate_stability(train, spec, grid, splits, stab_rng);
          const KappaSelection sel = select_lambda_kappa(curve, alpha);
          index = sel.index;
          lambda_hat = sel.lambda_hat;
        } else {
          RngStream cv_rng = master.substream(0x100 + pi * 8 + 2);
          const CriterionSelection sel = select_lambda_by_criterion(
              train, spec, grid, criterion, cv_rng, 10, &path);
          index = sel.index;
          lambda_hat = sel.lambda_hat;
        }
        const ActiveSet& active = path[static_cast<std::size_t>(index)].active;
        const Eigen::VectorXd refit = ols_refit(train, active);
        const OriginalScaleModel model = to_original_scale(train, refit);
        const double test_mse =
            (test_raw.y - model.predict(test_raw.X)).squaredNorm() /
            static_cast<double>(test_raw.n());
        std::vector<std::string> idx_strings;
        std::vector<std::string> name_strings;
        for (const int j : active.indices) {
          idx_strings.push_back(std::to_string(j));
          name_strings.push_back(
              train.column_names[static_cast<std::size_t>(j - 1)]);
        }
        rows.push_back({to_string(kind), to_string(criterion),
                        fmt(lambda_hat), fmt(test_mse),
                        std::to_string(active.size()),
                        join(idx_strings, ";"), join(name_strings, ";"), ""});
        std::printf("%-8s %-5s PE %.3f  active {%s}\n", to_string(kind),
                    to_string(criterion), test_mse,
                    join(name_strings, ", ").c_str());
      } catch (const Error& e) {
        rows.push_back({to_string(kind), to_string(criterion), "", "", "", "",
                        "", e.what()});
        std::printf("%-8s %-5s failed: %s\n", to_string(kind),
                    to_string(criterion), e.what());
      }
    }
  }
  write_csv((dir / "cells.csv").string(),
            {"penalty", "criterion", "lambda_hat", "test_mse", "n_active",
             "active_indices", "active_names", "error"},
            rows);

  ordered_json args;
  args["data"] = opts.data;
  args["response"] = opts.response;
  args["train_size"] = opts.train_size;
  args["split_column"] = opts.split_column;
  args["seed"] = opts.seed;
  args["out"] = opts.out;
  std::vector<std::string> argv = {"realdata", "--data", opts.data,
                                   "--response", opts.response,
                                   "--train-size",
                                   std::to_string(opts.train_size)};
  if (!opts.split_column.empty())
    argv.insert(argv.end(), {"--split-column", opts.split_column});
  argv.insert(argv.end(), {"--seed", std::to_string(opts.seed), "--out",
                           opts.out});
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  write_manifest(dir, "realdata", args, argv, opts.seed, {"cells.csv"}, wall);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tuning-parameter selection for penalized least squares by "
               "variable-selection stability"};
  app.require_subcommand(1);
  app.set_config("--config");

  const std::vector<std::string> penalty_names = {"lasso", "adalasso", "scad"};
  const std::vector<std::string> criterion_names = {"kappa", "cp", "bic",
                                                    "cv", "gcv"};

  TuneOpts tune;
  CLI::App* tune_cmd =
      app.add_subcommand("tune", "Select lambda on a dataset and refit");
  tune_cmd->add_option("--data", tune.data, "CSV file with a header row")
      ->required();
  tune_cmd->add_option("--response", tune.response, "Response column name")
      ->required();
  tune_cmd->add_option("--penalty", tune.penalty, "Penalty family")
      ->check(CLI::IsMember(penalty_names));
  tune_cmd->add_option("--criterion", tune.criterion, "Selection criterion")
      ->check(CLI::IsMember(criterion_names));
  tune_cmd->add_option("--alpha", tune.alpha,
                       "Stability threshold (kappa criterion)");
  tune_cmd->add_option("--splits", tune.splits,
                       "Half-splits for the stability estimate");
  tune_cmd->add_option("--grid-min", tune.grid_min, "log10 of smallest lambda");
  tune_cmd->add_option("--grid-max", tune.grid_max, "log10 of largest lambda");
  tune_cmd->add_option("--grid-points", tune.grid_points, "Grid size");
  tune_cmd->add_option("--seed", tune.seed, "RNG seed")
      ->envname("STABTUNE_SEED");
  tune_cmd->add_option("--out", tune.out, "Output directory");

  SimulateOpts sim;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Run a criterion-comparison study");
  sim_cmd->add_option("--scenario", sim.scenario, "Scenario 1 or 2")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  sim_cmd->add_option("--n", sim.n, "Sample size")->required();
  sim_cmd->add_option("--sigma", sim.sigma, "Noise level");
  sim_cmd->add_option("--replicates", sim.replicates, "Replicate count");
  sim_cmd->add_option("--penalties", sim.penalties, "Penalties to run")
      ->check(CLI::IsMember(penalty_names));
  sim_cmd->add_option("--criteria", sim.criteria, "Criteria to run")
      ->check(CLI::IsMember(criterion_names));
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")
      ->envname("STABTUNE_SEED");
  sim_cmd->add_option("--jobs", sim.jobs, "Worker threads");
  sim_cmd->add_option("--out", sim.out, "Output directory");

  SensitivityOpts sens;
  CLI::App* sens_cmd = app.add_subcommand(
      "sensitivity", "Sweep the stability threshold alpha");
  sens_cmd->add_option("--scenario", sens.scenario, "Scenario 1 or 2")
      ->check(CLI::IsMember({1, 2}));
  sens_cmd->add_option("--n", sens.n, "Sample size")->required();
  sens_cmd->add_option("--sigma", sens.sigma, "Noise level");
  sens_cmd->add_option("--alphas", sens.alphas,
                       "Alpha grid: a:b:step or comma list");
  sens_cmd->add_option("--penalty", sens.penalty, "Penalty family")
      ->check(CLI::IsMember(penalty_names));
  sens_cmd->add_option("--replicates", sens.replicates, "Replicate count");
  sens_cmd->add_option("--seed", sens.seed, "RNG seed")
      ->envname("STABTUNE_SEED");
  sens_cmd->add_option("--out", sens.out, "Output directory");

  RealdataOpts real;
  CLI::App* real_cmd = app.add_subcommand(
      "realdata", "Train/test workflow over all penalties and criteria");
  real_cmd->add_option("--data", real.data, "CSV file with a header row")
      ->required();
  real_cmd->add_option("--response", real.response, "Response column name")
      ->required();
  real_cmd->add_option("--train-size", real.train_size,
                       "Rows in the random training split");
  real_cmd->add_option("--split-column", real.split_column,
                       "Boolean column marking training rows");
  real_cmd->add_option("--seed", real.seed, "RNG seed")
      ->envname("STABTUNE_SEED");
  real_cmd->add_option("--out", real.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(tune_cmd)) return cmd_tune(tune);
    if (app.got_subcommand(sim_cmd)) return cmd_simulate(sim);
    if (app.got_subcommand(sens_cmd)) return cmd_sensitivity(sens);
    if (app.got_subcommand(real_cmd)) return cmd_realdata(real);
  } catch (const stabtune::ArgumentError& e) {
    std::fprintf(stderr, "argument error: %s\n", e.what());
    return 2;
  } catch (const stabtune::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const stabtune::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 4;
  }
  return 0;
}
