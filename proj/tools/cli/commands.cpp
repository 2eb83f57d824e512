#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <threshreg/bootstrap.hpp>
#include <threshreg/continuity.hpp>
#include <threshreg/errors.hpp>
#include <threshreg/estimators.hpp>
#include <threshreg/inference.hpp>
#include <threshreg/montecarlo.hpp>

#include "cli/csv.hpp"

namespace threshreg::cli {

namespace {

GridSpec make_grid(const RunConfig& cfg) {
  GridSpec gs;
  gs.trim_fraction = cfg.trim;
  if (cfg.grid_points > 0) gs.n_points = cfg.grid_points;
  return gs;
}

KernelSpec make_kernel(const RunConfig& cfg) {
  KernelSpec ks;
  if (cfg.kernel == "epanechnikov")
    ks.kind = KernelKind::epanechnikov;
  else if (cfg.kernel == "gaussian")
    ks.kind = KernelKind::gaussian;
  else
    throw DomainError("unknown kernel '" + cfg.kernel + "'");
  if (cfg.bandwidth < 0.0) throw DomainError("bandwidth must be positive");
  if (cfg.bandwidth > 0.0) ks.bandwidth = cfg.bandwidth;
  return ks;
}

MultiplierDist make_dist(const RunConfig& cfg) {
  if (cfg.multiplier == "rademacher") return MultiplierDist::rademacher;
  if (cfg.multiplier == "normal") return MultiplierDist::standard_normal;
  throw DomainError("unknown multiplier distribution '" + cfg.multiplier + "'");
}

double single_level(const RunConfig& cfg) {
  if (cfg.levels.size() != 1)
    throw DomainError("this command takes exactly one --level");
  const double s = cfg.levels.front();
  if (s <= 0.0 || s >= 1.0) throw DomainError("--level must lie in (0,1)");
  return s;
}

ojson data_section(const LoadedData& data, const RunConfig& cfg) {
  ojson d;
  d["input"] = cfg.input_path;
  d["n"] = data.ds.n();
  d["k"] = data.ds.k();
  d["response"] = data.y_name;
  d["columns"] = data.x_names;
  d["dropped_rows"] = data.dropped_rows;
  return d;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// "y = 2.13 (0.41) + 3.02 (0.11)*x + ..." with SEs in parentheses.
std::string equation(const std::vector<std::string>& names,
                     const Eigen::VectorXd& coef, const Eigen::VectorXd& se,
                     const std::string& lhs) {
  std::ostringstream os;
  os << lhs << " =";
  for (int j = 0; j < coef.size(); ++j) {
    const double c = coef(j);
    os << (j == 0 ? " " : (c < 0 ? " - " : " + "));
    os << short_num(j == 0 ? c : std::abs(c)) << " (" << short_num(se(j)) << ")";
    if (names[static_cast<std::size_t>(j)] != "const")
      os << "*" << names[static_cast<std::size_t>(j)];
  }
  return os.str();
}

ojson interval_rows(const std::vector<GammaInterval>& ivs) {
  ojson rows = ojson::array();
  for (const auto& iv : ivs) {
    ojson r;
    r["lo"] = iv.lo;
    r["hi"] = iv.hi;
    r["open_lo"] = iv.unbounded_lo;
    r["open_hi"] = iv.unbounded_hi;
    rows.push_back(std::move(r));
  }
  return rows;
}

Eigen::MatrixXd hinge_design(const Dataset& ds, double gamma) {
  const int n = ds.n(), k = ds.k();
  Eigen::MatrixXd H(n, k + 1);
  H.leftCols(k) = ds.X();
  for (int t = 0; t < n; ++t) {
    const double d = ds.X()(t, k - 1) - gamma;
    H(t, k) = d > 0.0 ? d : 0.0;
  }
  return H;
}

}  // namespace

ojson run_estimate(const RunConfig& cfg) {
  const LoadedData data = load_csv(cfg.input_path, cfg);
  const Dataset& ds = data.ds;
  const GridSpec gs = make_grid(cfg);
  const int k = ds.k();

  const FitUnconstrained lse = fit_lse(ds, gs);
  const FitConstrained clse = fit_clse(ds, gs);

  const Eigen::MatrixXd cov_u = slope_covariance(ds, lse);
  const Eigen::VectorXd se_u = cov_u.diagonal().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd H = hinge_design(ds, clse.theta.gamma);
  const Eigen::MatrixXd cov_c = sandwich_covariance(H, clse.residuals);
  const Eigen::VectorXd se_c = cov_c.diagonal().cwiseMax(0.0).cwiseSqrt();

  ojson rep;
  rep["command"] = "estimate";
  rep["data"] = data_section(data, cfg);

  ojson u;
  u["gamma_hat"] = lse.theta.gamma;
  u["ssr"] = lse.ssr_hat;
  u["n_lower"] = lse.n_lower;
  u["n_upper"] = lse.n_upper;
  ojson urows = ojson::array();
  for (int j = 0; j < k; ++j) {
    ojson r;
    r["column"] = data.x_names[static_cast<std::size_t>(j)];
    r["beta"] = lse.theta.beta(j);
    r["se_beta"] = se_u(j);
    r["delta"] = lse.theta.delta(j);
    r["se_delta"] = se_u(k + j);
    urows.push_back(std::move(r));
  }
  u["coefficients"] = std::move(urows);
  u["fitted_lower"] = equation(data.x_names, lse.theta.beta, se_u.head(k), data.y_name) +
                      "   [" + data.x_names.back() + " <= " +
                      short_num(lse.theta.gamma) + "]";
  {
    // Upper-regime slopes beta+delta with SEs from the joint covariance.
    const Eigen::VectorXd upper = lse.theta.beta + lse.theta.delta;
    Eigen::VectorXd se_up(k);
    for (int j = 0; j < k; ++j)
      se_up(j) = std::sqrt(std::max(
          0.0, cov_u(j, j) + cov_u(k + j, k + j) + 2.0 * cov_u(j, k + j)));
    u["fitted_upper"] = equation(data.x_names, upper, se_up, data.y_name) + "   [" +
                        data.x_names.back() + " > " + short_num(lse.theta.gamma) + "]";
  }
  rep["unconstrained"] = std::move(u);

  ojson c;
  c["gamma_tilde"] = clse.theta.gamma;
  c["ssr"] = clse.ssr_tilde;
  c["n_lower"] = clse.n_lower;
  c["n_upper"] = clse.n_upper;
  c["delta3"] = clse.theta.delta3;
  c["se_delta3"] = se_c(k);
  ojson crows = ojson::array();
  for (int j = 0; j < k; ++j) {
    ojson r;
    r["column"] = data.x_names[static_cast<std::size_t>(j)];
    r["beta"] = clse.theta.beta(j);
    r["se_beta"] = se_c(j);
    crows.push_back(std::move(r));
  }
  c["coefficients"] = std::move(crows);
  c["fitted"] = equation(data.x_names, clse.theta.beta, se_c.head(k), data.y_name) +
                " + " + short_num(clse.theta.delta3) + " (" + short_num(se_c(k)) +
                ")*max(" + data.x_names.back() + " - " +
                short_num(clse.theta.gamma) + ", 0)";
  rep["constrained"] = std::move(c);

  rep["provenance"] = provenance(cfg);
  return rep;
}

ojson run_continuity(const RunConfig& cfg) {
  const LoadedData data = load_csv(cfg.input_path, cfg);
  const Dataset& ds = data.ds;
  const GridSpec gs = make_grid(cfg);
  const KernelSpec ks = make_kernel(cfg);
  if (cfg.boot_reps < 1) throw DomainError("--boot-reps must be >= 1");

  const ContinuityBootstrap bt = continuity_test_bootstrap(
      ds, cfg.boot_reps, make_dist(cfg), RngSeed{cfg.seed, 0}, gs, ks, cfg.threads);

  ojson rep;
  rep["command"] = "test-continuity";
  rep["data"] = data_section(data, cfg);

  ojson t;
  t["q_n"] = bt.sample.q_n;
  t["p_value_q_n"] = bt.p_qn;
  t["qlr_tilde"] = bt.sample.qlr_tilde;
  t["p_value_qlr_tilde"] = bt.p_qlr;
  t["gamma_hat"] = bt.sample.gamma_hat;
  t["gamma_tilde"] = bt.sample.gamma_tilde;
  t["ssr_unconstrained"] = bt.sample.ssr_hat;
  t["ssr_constrained"] = bt.sample.ssr_tilde;
  t["xi_hat"] = bt.sample.xi_hat;
  t["bandwidth"] = resolve_bandwidth(ds, ks);
  t["boot_reps"] = bt.B;
  t["degenerate_resamples"] = bt.degenerate;
  rep["test"] = std::move(t);

  rep["provenance"] = provenance(cfg);
  return rep;
}

ojson run_ci(const RunConfig& cfg) {
  const LoadedData data = load_csv(cfg.input_path, cfg);
  const Dataset& ds = data.ds;
  const GridSpec gs = make_grid(cfg);
  const KernelSpec ks = make_kernel(cfg);
  const double level = single_level(cfg);

  const FitUnconstrained fit = fit_lse(ds, gs);
  const QlrCurve curve = qlr_curve(ds, fit);
  const ScaleFactor sf = scale_factor(ds, fit, ks);
  const ConfidenceSet acs = asymptotic_confidence_set(curve, sf, level);

  GridBootstrapOptions opt;
  opt.level = level;
  opt.n_quantile_points = cfg.quantile_points;
  opt.B = cfg.boot_reps;
  opt.kernel = ks;
  opt.dist = make_dist(cfg);
  opt.seed = RngSeed{cfg.seed, 0};
  opt.grid = gs;
  opt.threads = cfg.threads;
  const GridBootstrapCi gci = grid_bootstrap_ci(ds, opt);

  ojson rep;
  rep["command"] = "ci";
  rep["data"] = data_section(data, cfg);

  ojson s;
  s["gamma_hat"] = fit.theta.gamma;
  s["level"] = level;
  s["xi_hat"] = sf.xi_hat;
  s["bandwidth"] = sf.bandwidth;
  s["acv"] = acs.threshold;
  s["boot_reps"] = gci.quantiles.B;
  s["degenerate_resamples"] = gci.degenerate;
  rep["summary"] = std::move(s);
  rep["asymptotic_interval"] = interval_rows(acs.intervals);
  rep["grid_bootstrap_interval"] = interval_rows(gci.intervals);

  ojson qrows = ojson::array();
  for (std::size_t j = 0; j < gci.quantiles.gammas.size(); ++j) {
    ojson r;
    r["gamma"] = gci.quantiles.gammas[j];
    r["quantile"] = gci.quantiles.quantiles[j];
    qrows.push_back(std::move(r));
  }
  rep["bootstrap_quantiles"] = std::move(qrows);

  // The three curves of the diagnostic plot, one row per grid point.
  const PiecewiseLinear qc{gci.quantiles.gammas, gci.quantiles.quantiles};
  ojson crows = ojson::array();
  std::vector<double> cg, cs_, ca, cq;
  for (std::size_t j = 0; j < curve.gammas.size(); ++j) {
    const double g = curve.gammas[j];
    const double sc = gci.sample_scaled[j];
    const double gq = qc.eval(g);
    ojson r;
    r["gamma"] = g;
    r["qlr_scaled"] = sc;
    r["acv"] = acs.threshold;
    r["grid_quantile"] = gq;
    crows.push_back(std::move(r));
    cg.push_back(g);
    cs_.push_back(sc);
    ca.push_back(acs.threshold);
    cq.push_back(gq);
  }
  rep["curve"] = std::move(crows);
  rep["provenance"] = provenance(cfg);

  if (!cfg.out.empty())
    write_tsv_table(companion_path(cfg.out, "_curve"),
                    {"gamma", "qlr_scaled", "acv", "grid_quantile"},
                    {cg, cs_, ca, cq});
  return rep;
}

ojson run_simulate(const RunConfig& cfg) {
  if (cfg.n < 1) throw DomainError("--n must be positive");
  if (cfg.replications < 1) throw DomainError("--replications must be >= 1");
  for (double s : cfg.levels)
    if (s <= 0.0 || s >= 1.0) throw DomainError("--level must lie in (0,1)");

  McDesign d;
  if (cfg.design == "A") {
    d = McDesign::design_A(cfg.n, cfg.gamma0);
  } else if (cfg.design == "B") {
    d = McDesign::design_B(cfg.n, cfg.gamma0);
  } else if (cfg.design == "C") {
    d = McDesign::design_C(cfg.n, cfg.q_mean);
  } else if (cfg.design == "D") {
    if (cfg.gamma0 <= 0.0 || cfg.gamma0 >= 1.0)
      throw DomainError("design D takes --gamma0 as a sample fraction in (0,1)");
    d = McDesign::design_D(cfg.n, cfg.gamma0);
  } else {
    throw DomainError("unknown design '" + cfg.design + "'");
  }

  const KernelSpec ks = make_kernel(cfg);
  const MultiplierDist dist = make_dist(cfg);
  const RngSeed seed{cfg.seed, 0};

  McReport mc;
  if (cfg.experiment == "size") {
    mc = run_size_experiment(d, cfg.levels, cfg.replications, seed, ks, dist,
                             cfg.threads);
  } else if (cfg.experiment == "coverage") {
    mc = run_coverage_experiment(d, cfg.levels, cfg.replications, cfg.boot_reps,
                                 cfg.quantile_points, seed, ks, dist, cfg.threads);
  } else if (cfg.experiment == "power") {
    mc = run_power_experiment(d, cfg.levels, cfg.replications,
                              cfg.delta_multipliers, seed, ks, dist, cfg.threads);
  } else {
    throw DomainError("unknown experiment '" + cfg.experiment + "'");
  }

  ojson rep;
  rep["command"] = "simulate";
  ojson sim;
  sim["design"] = mc.design;
  sim["n"] = mc.n;
  sim["gamma0"] = d.gamma0;
  sim["delta"] = d.delta();
  sim["replications"] = mc.replications;
  sim["boot_reps"] = mc.boot_reps;
  sim["warp_speed"] = mc.warp_speed;
  sim["experiment"] = cfg.experiment;
  rep["simulation"] = std::move(sim);

  ojson rows = ojson::array();
  for (const auto& cell : mc.cells) {
    ojson r;
    r["method"] = cell.method;
    r["level"] = cell.level;
    r["estimate"] = cell.estimate;
    r["mc_se"] = cell.mc_se;
    r["extra"] = cell.extra;
    rows.push_back(std::move(r));
  }
  rep["cells"] = std::move(rows);
  rep["provenance"] = provenance(cfg);
  return rep;
}

}  // namespace threshreg::cli
