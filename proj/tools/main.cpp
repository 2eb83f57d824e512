// threshreg command-line tool: threshold-regression estimation, continuity
// testing, threshold confidence sets, and the simulation harness.

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include <threshreg/errors.hpp>
#include <threshreg/version.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/report.hpp"

namespace {

using threshreg::cli::RunConfig;

void add_data_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input_path, "CSV file (header row required)")
      ->required();
  sub->add_option("--response", cfg.response, "response column")->required();
  sub->add_option("--regressors", cfg.regressors,
                  "regressor columns, each 'name' or 'name:lagK'")
      ->delimiter(',');
  sub->add_option("--threshold-var", cfg.threshold_var,
                  "threshold column, 'name' or 'name:lagK'; always the last "
                  "design column")
      ->required();
  sub->add_option("--lag", cfg.lag,
                  "shortcut: lag the threshold variable by K and add the "
                  "response lagged by K as a regressor");
}

void add_model_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--trim", cfg.trim, "per-tail trimming fraction for the grid");
  sub->add_option("--grid-points", cfg.grid_points,
                  "number of grid candidates (0 = default rule)");
  sub->add_option("--kernel", cfg.kernel, "epanechnikov | gaussian");
  sub->add_option("--bandwidth", cfg.bandwidth,
                  "kernel bandwidth (0 = rule-of-thumb)");
}

void add_sampling_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--boot-reps", cfg.boot_reps, "bootstrap replications");
  sub->add_option("--multiplier", cfg.multiplier,
                  "wild-bootstrap multipliers: rademacher | normal");
  sub->add_option("--seed", cfg.seed, "random seed (recorded in the output)");
  sub->add_option("--threads", cfg.threads, "worker threads (0 = one)");
}

void add_output_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--level", cfg.levels, "confidence/nominal level(s)")
      ->delimiter(',');
  sub->add_option("--format", cfg.format, "tsv | json");
  sub->add_option("--out", cfg.out, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"threshold regression estimation and inference"};
  app.set_version_flag("--version", threshreg::version_string);
  app.require_subcommand(1);

  RunConfig cfg;
  using threshreg::cli::ojson;
  ojson (*command)(const RunConfig&) = nullptr;

  auto* est = app.add_subcommand("estimate",
                                 "fit the jump and kink models");
  add_data_options(est, cfg);
  add_model_options(est, cfg);
  add_sampling_options(est, cfg);
  add_output_options(est, cfg);
  est->callback([&] { command = threshreg::cli::run_estimate; });

  auto* tc = app.add_subcommand("test-continuity",
                                "wild-bootstrap tests of a continuous threshold");
  add_data_options(tc, cfg);
  add_model_options(tc, cfg);
  add_sampling_options(tc, cfg);
  add_output_options(tc, cfg);
  tc->callback([&] { command = threshreg::cli::run_continuity; });

  auto* ci = app.add_subcommand("ci",
                                "asymptotic and grid-bootstrap threshold "
                                "confidence sets with plot data");
  add_data_options(ci, cfg);
  add_model_options(ci, cfg);
  add_sampling_options(ci, cfg);
  add_output_options(ci, cfg);
  ci->add_option("--quantile-points", cfg.quantile_points,
                 "bootstrap quantile evaluation points");
  ci->callback([&] { command = threshreg::cli::run_ci; });

  auto* sim = app.add_subcommand("simulate", "Monte Carlo experiments");
  add_model_options(sim, cfg);
  add_sampling_options(sim, cfg);
  add_output_options(sim, cfg);
  sim->add_option("--design", cfg.design, "A | B | C | D");
  sim->add_option("--experiment", cfg.experiment, "size | coverage | power");
  sim->add_option("--n", cfg.n, "sample size per replication");
  sim->add_option("--replications", cfg.replications, "Monte Carlo replications");
  sim->add_option("--gamma0", cfg.gamma0,
                  "true threshold (designs A/B) or sample fraction (design D)");
  sim->add_option("--q-mean", cfg.q_mean, "threshold-variable mean (design C)");
  sim->add_option("--delta-multiplier", cfg.delta_multipliers,
                  "jump-size multipliers (power experiment)")
      ->delimiter(',');
  sim->add_option("--quantile-points", cfg.quantile_points,
                  "quantile evaluation points (coverage experiment)");
  sim->callback([&] { command = threshreg::cli::run_simulate; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const ojson report = command(cfg);
    threshreg::cli::emit_report(report, cfg);
  } catch (const threshreg::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const threshreg::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
