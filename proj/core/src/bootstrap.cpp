#include "threshreg/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "threshreg/detail/boot_engine.hpp"
#include "threshreg/parallel.hpp"

namespace threshreg {

Eigen::VectorXd wild_resample(const Eigen::VectorXd& fitted,
                              const Eigen::VectorXd& residuals,
                              MultiplierDist dist, const RngSeed& seed) {
  if (fitted.size() != residuals.size())
    throw DimensionMismatch("wild_resample: fitted/residual lengths disagree");
  Rng rng(seed);
  Eigen::VectorXd eta(fitted.size());
  rng.fill_multipliers(eta, dist);
  return fitted + residuals.cwiseProduct(eta);
}

ContinuityBootstrap continuity_test_bootstrap(const Dataset& ds, int B,
                                              MultiplierDist dist, const RngSeed& seed,
                                              const GridSpec& grid,
                                              const KernelSpec& kernel, int threads) {
  if (B < 1) throw DomainError("continuity_test_bootstrap: B must be >= 1");
  ContinuityBootstrap out;
  out.B = B;
  out.sample = continuity_statistics(ds, grid, kernel);

  const int n = ds.n();
  const Eigen::VectorXd q = ds.q();
  const double a = resolve_bandwidth(ds, kernel);

  const auto sd = detail::SortedData::make(ds);
  std::vector<double> gammas;
  gammas.reserve(out.sample.lse.profile.size());
  for (const auto& [g, s] : out.sample.lse.profile) gammas.push_back(g);
  const auto cs = detail::CandidateSet::make(sd, gammas);
  const auto hp = detail::HingePlan::make(ds, gammas);

  // Null-imposed DGP shared by both tests: constrained fitted values plus
  // perturbed unconstrained residuals.
  const Eigen::VectorXd fitted_kink = ds.y() - out.sample.clse.residuals;
  const Eigen::VectorXd& resid = out.sample.lse.residuals;

  const int tilde_idx = static_cast<int>(
      std::lower_bound(cs.gammas.begin(), cs.gammas.end(), out.sample.gamma_tilde) -
      cs.gammas.begin());

  // Studentized version of the profiled statistic at gamma_tilde: the
  // kink-direction scale factor uses the constrained residuals, so sample
  // and resamples are compared on one pivotal scale.
  out.xi_tilde = detail::xi_kink(q, out.sample.clse.residuals,
                                 out.sample.gamma_tilde, kernel.kind, a,
                                 out.sample.ssr_hat);
  if (!(out.xi_tilde > 0.0))
    throw DegenerateFit(
        "continuity_test_bootstrap: kink scale factor degenerate at gamma_tilde");
  const double s_tilde = out.sample.lse.profile[tilde_idx].second;
  out.qlr_studentized =
      std::max(0.0, n * (s_tilde - out.sample.ssr_hat) / out.sample.ssr_hat) /
      out.xi_tilde;

  out.draws_qn.assign(B, 0.0);
  out.draws_qlr.assign(B, 0.0);
  std::vector<int> degen(B, 0);

  auto one_rep = [&](int b) {
    detail::LseWorkspace lws;
    detail::ClseWorkspace cws;
    Eigen::VectorXd eta(n), ystar(n);
    const double inf = std::numeric_limits<double>::infinity();

    auto pair = detail::kink_pair_draw(sd, cs, hp, tilde_idx, fitted_kink, resid,
                                       q, kernel.kind, a, dist, substream(seed, b),
                                       lws, cws, eta, ystar);
    if (std::isnan(pair.qn) || std::isnan(pair.qlr)) {
      pair = detail::kink_pair_draw(sd, cs, hp, tilde_idx, fitted_kink, resid, q,
                                    kernel.kind, a, dist,
                                    substream(seed, b, detail::kTagRetry), lws,
                                    cws, eta, ystar);
      if (std::isnan(pair.qn)) { pair.qn = inf; ++degen[b]; }
      if (std::isnan(pair.qlr)) { pair.qlr = inf; ++degen[b]; }
    }
    out.draws_qn[b] = pair.qn;
    out.draws_qlr[b] = pair.qlr;
  };
  parallel_for(B, threads, one_rep);

  int exceed_qn = 0, exceed_qlr = 0;
  for (int b = 0; b < B; ++b) {
    if (out.draws_qn[b] >= out.sample.q_n) ++exceed_qn;
    if (out.draws_qlr[b] >= out.qlr_studentized) ++exceed_qlr;
    out.degenerate += degen[b];
  }
  out.p_qn = static_cast<double>(exceed_qn) / B;
  out.p_qlr = static_cast<double>(exceed_qlr) / B;
  return out;
}

std::vector<double> grid_bootstrap_draws(const Dataset& ds, double gamma_j, int B,
                                         const KernelSpec& kernel, MultiplierDist dist,
                                         const RngSeed& seed, const GridSpec& grid,
                                         int threads) {
  if (B < 1) throw DomainError("grid_bootstrap_draws: B must be >= 1");
  const auto gammas = threshold_grid(ds, grid);
  if (gamma_j < gammas.front() || gamma_j > gammas.back())
    throw DomainError("grid_bootstrap_draws: gamma_j outside the candidate span");

  const double a = resolve_bandwidth(ds, kernel);
  const Eigen::MatrixXd& X = ds.X();
  const Eigen::VectorXd q = ds.q();

  const auto sd = detail::SortedData::make(ds);
  auto with_target = gammas;
  with_target.push_back(gamma_j);
  const auto cs = detail::CandidateSet::make(sd, with_target);
  const int target = static_cast<int>(
      std::lower_bound(cs.gammas.begin(), cs.gammas.end(), gamma_j) -
      cs.gammas.begin());

  // DGP under "the threshold is gamma_j": the model refit at gamma_j
  // supplies both the fitted values and the residuals to perturb.
  detail::LseWorkspace fws;
  const auto fr = detail::lse_fit_at(sd, cs.boundary[target], ds.y(), fws);
  const Eigen::VectorXd fitted = ds.y() - fr.residuals;

  std::vector<double> draws(B, 0.0);
  std::vector<int> degen(B, 0);
  parallel_for(B, threads, [&](int b) {
    detail::LseWorkspace ws;
    Eigen::VectorXd eta, ystar;
    draws[b] = detail::grid_boot_draw_retry(sd, cs, target, fitted, fr.residuals,
                                            X, q, kernel.kind, a, dist,
                                            substream(seed, b), ws, eta, ystar,
                                            &degen[b]);
  });
  return draws;
}

double grid_quantile_at(const Dataset& ds, double gamma_j, double s, int B,
                        const KernelSpec& kernel, MultiplierDist dist,
                        const RngSeed& seed, const GridSpec& grid, int threads) {
  const auto draws = grid_bootstrap_draws(ds, gamma_j, B, kernel, dist, seed,
                                          grid, threads);
  return order_statistic_quantile(draws, s);
}

GridBootstrapCi grid_bootstrap_ci(const Dataset& ds, const GridBootstrapOptions& opt) {
  if (!(opt.level > 0.0 && opt.level < 1.0))
    throw DomainError("grid_bootstrap_ci: level outside (0,1)");
  if (opt.B < 39)
    throw DomainError("grid_bootstrap_ci: need B >= 39 bootstrap replications");

  const auto gammas = threshold_grid(ds, opt.grid);
  const FitUnconstrained fit = fit_lse(ds, gammas);

  GridBootstrapCi out;
  out.level = opt.level;
  out.gamma_hat = fit.theta.gamma;
  out.xi = scale_factor(ds, fit, opt.kernel);
  out.sample_curve = qlr_curve(ds, fit);
  out.sample_scaled.reserve(out.sample_curve.values.size());
  for (double v : out.sample_curve.values)
    out.sample_scaled.push_back(v / out.xi.xi_hat);

  // Quantile evaluation points: explicit, or equidistant over the candidate
  // span optionally augmented with both threshold estimates.
  std::vector<double> points = opt.quantile_points;
  if (points.empty()) {
    const int P = std::max(2, opt.n_quantile_points);
    const double lo = gammas.front(), hi = gammas.back();
    for (int j = 0; j < P; ++j)
      points.push_back(lo + (hi - lo) * static_cast<double>(j) / (P - 1));
    if (opt.augment_with_estimates) {
      points.push_back(fit.theta.gamma);
      points.push_back(fit_clse(ds, gammas).theta.gamma);
    }
  }
  for (double& p : points) p = std::clamp(p, gammas.front(), gammas.back());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const double a = out.xi.bandwidth;
  const Eigen::MatrixXd& X = ds.X();
  const Eigen::VectorXd q = ds.q();
  const auto sd = detail::SortedData::make(ds);

  const int P = static_cast<int>(points.size());
  out.quantiles.gammas = points;
  out.quantiles.quantiles.assign(P, 0.0);
  out.quantiles.level = opt.level;
  out.quantiles.B = opt.B;

  std::vector<double> draws(opt.B, 0.0);
  std::vector<int> degen(opt.B, 0);
  detail::LseWorkspace fws;
  for (int j = 0; j < P; ++j) {
    auto with_target = gammas;
    with_target.push_back(points[j]);
    const auto cs = detail::CandidateSet::make(sd, with_target);
    const int target = static_cast<int>(
        std::lower_bound(cs.gammas.begin(), cs.gammas.end(), points[j]) -
        cs.gammas.begin());
    // Per-point DGP: refit at this candidate, resample its residuals.
    const auto fr = detail::lse_fit_at(sd, cs.boundary[target], ds.y(), fws);
    const Eigen::VectorXd fitted = ds.y() - fr.residuals;
    std::fill(degen.begin(), degen.end(), 0);
    parallel_for(opt.B, opt.threads, [&](int b) {
      detail::LseWorkspace ws;
      Eigen::VectorXd eta, ystar;
      draws[b] = detail::grid_boot_draw_retry(
          sd, cs, target, fitted, fr.residuals, X, q, opt.kernel.kind, a, opt.dist,
          substream(opt.seed, j, b), ws, eta, ystar, &degen[b]);
    });
    for (int v : degen) out.degenerate += v;
    out.quantiles.quantiles[j] = order_statistic_quantile(draws, opt.level);
  }

  out.intervals = sublevel_intervals(
      PiecewiseLinear{out.sample_curve.gammas, out.sample_scaled},
      PiecewiseLinear{out.quantiles.gammas, out.quantiles.quantiles});
  return out;
}

}  // namespace threshreg
