#include "threshreg/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "threshreg/detail/boot_engine.hpp"
#include "threshreg/grid.hpp"
#include "threshreg/inference.hpp"
#include "threshreg/kernel.hpp"
#include "threshreg/parallel.hpp"
#include "threshreg/util.hpp"

namespace threshreg {

double McDesign::delta() const {
  return delta_scale * std::pow(static_cast<double>(n), -phi);
}

std::string McDesign::tag() const {
  switch (kind) {
    case Kind::A: return "A";
    case Kind::B: return "B";
    case Kind::C: return "C";
    case Kind::D: return "D";
  }
  return "?";
}

McDesign McDesign::design_A(int n, double gamma0) {
  McDesign d;
  d.kind = Kind::A;
  d.n = n;
  d.gamma0 = gamma0;
  d.q_mean = 2.0;
  d.delta_scale = std::sqrt(10.0) / 4.0;
  d.phi = 0.25;
  return d;
}

McDesign McDesign::design_B(int n, double gamma0) {
  McDesign d = design_A(n, gamma0);
  d.kind = Kind::B;
  return d;
}

McDesign McDesign::design_C(int n, double q_mean) {
  McDesign d;
  d.kind = Kind::C;
  d.n = n;
  d.gamma0 = 0.0;
  d.q_mean = q_mean;
  d.delta_scale = 2.0;
  d.phi = 0.0;
  return d;
}

McDesign McDesign::design_D(int n, double gamma0_fraction) {
  McDesign d;
  d.kind = Kind::D;
  d.n = n;
  // The break sits after observation floor(fraction*n); expressed on the
  // unit time scale t/n so it can live in the threshold column.
  d.gamma0 = std::floor(gamma0_fraction * n) / static_cast<double>(n);
  d.q_mean = 2.0;
  d.delta_scale = std::sqrt(10.0) / 4.0;
  d.phi = 0.25;
  return d;
}

Dataset simulate_design(const McDesign& design, const RngSeed& seed) {
  const int n = design.n;
  const double delta = design.delta();
  Rng rng(seed);

  Eigen::VectorXd qv(n), ev(n);
  for (int t = 0; t < n; ++t) qv(t) = design.q_mean + rng.normal();
  for (int t = 0; t < n; ++t) ev(t) = rng.normal();

  Eigen::VectorXd y(n);
  Eigen::MatrixXd X;
  switch (design.kind) {
    case McDesign::Kind::A: {
      // Extra regressor x carries both the slope and the jump; the
      // threshold variable enters the regressor set as the last column.
      Eigen::VectorXd xv(n);
      for (int t = 0; t < n; ++t) xv(t) = 2.0 + rng.normal();
      X.resize(n, 3);
      for (int t = 0; t < n; ++t) {
        X(t, 0) = 1.0;
        X(t, 1) = xv(t);
        X(t, 2) = qv(t);
        y(t) = 2.0 + 3.0 * xv(t) + std::abs(qv(t)) * ev(t);
        if (qv(t) > design.gamma0) y(t) += delta * xv(t);
      }
      break;
    }
    case McDesign::Kind::B:
    case McDesign::Kind::C: {
      X.resize(n, 2);
      for (int t = 0; t < n; ++t) {
        X(t, 0) = 1.0;
        X(t, 1) = qv(t);
        y(t) = 2.0 + 3.0 * qv(t) + std::abs(qv(t)) * ev(t);
        if (qv(t) > design.gamma0) y(t) += delta * qv(t);
      }
      break;
    }
    case McDesign::Kind::D: {
      // Break in time: the unit-scale index is the threshold column.
      X.resize(n, 3);
      for (int t = 0; t < n; ++t) {
        const double tau = static_cast<double>(t + 1) / n;
        X(t, 0) = 1.0;
        X(t, 1) = qv(t);
        X(t, 2) = tau;
        y(t) = 2.0 + 3.0 * qv(t) + std::abs(qv(t)) * ev(t);
        if (tau > design.gamma0) y(t) += delta * qv(t);
      }
      break;
    }
  }
  return Dataset(std::move(y), std::move(X));
}

namespace {

// The simulation studies trim a wider margin than the library default so
// candidate thresholds keep a workable share of observations per regime at
// the sample sizes exercised here.
GridSpec mc_grid() {
  GridSpec gs;
  gs.trim_fraction = 0.10;
  return gs;
}

double mc_se(double p, int R) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / R);
}

bool contains_gamma(const std::vector<GammaInterval>& intervals, double g) {
  for (const auto& iv : intervals)
    if (g >= iv.lo && g <= iv.hi) return true;
  return false;
}

}  // namespace

McReport run_size_experiment(const McDesign& design, const std::vector<double>& levels,
                             int R, const RngSeed& seed, const KernelSpec& kernel,
                             MultiplierDist dist, int threads) {
  if (R < 1) throw DomainError("run_size_experiment: R must be >= 1");
  const int n = design.n;
  const int L = static_cast<int>(levels.size());
  std::vector<double> tstat(R), bdraw(R);

  parallel_for(R, threads, [&](int r) {
    const Dataset ds = simulate_design(design, substream(seed, detail::kTagData, r));
    const auto gammas = threshold_grid(ds, mc_grid());
    const auto sd = detail::SortedData::make(ds);
    auto with_target = gammas;
    with_target.push_back(design.gamma0);
    const auto cs = detail::CandidateSet::make(sd, with_target);
    const int target = static_cast<int>(
        std::lower_bound(cs.gammas.begin(), cs.gammas.end(), design.gamma0) -
        cs.gammas.begin());

    const double a = default_bandwidth(ds);
    detail::LseWorkspace ws;
    const auto ef = detail::eval_fit(sd, cs, ds.y(), ds.X(), ds.q(), kernel.kind, a, ws);
    const double t = detail::scaled_stat_at(ef, target, n);
    if (std::isnan(t))
      throw DegenerateFit("run_size_experiment: degenerate sample fit");
    tstat[r] = t;

    // Warp-speed: a single bootstrap draw per replication, generated from
    // the model refit at the hypothesised threshold.
    const auto fr = detail::lse_fit_at(sd, cs.boundary[target], ds.y(), ws);
    const Eigen::VectorXd fitted = ds.y() - fr.residuals;
    Eigen::VectorXd eta, ystar;
    int degen = 0;
    bdraw[r] = detail::grid_boot_draw_retry(
        sd, cs, target, fitted, fr.residuals, ds.X(), ds.q(), kernel.kind, a,
        dist, substream(seed, detail::kTagBoot, r), ws, eta, ystar, &degen);
  });

  McReport rep;
  rep.design = design.tag();
  rep.n = n;
  rep.replications = R;
  rep.boot_reps = 1;
  rep.seed = seed.seed;
  rep.warp_speed = true;
  for (int l = 0; l < L; ++l) {
    const double alpha = levels[l];
    const double cv_asym = limit_quantile(1.0 - alpha);
    const double cv_boot = order_statistic_quantile(bdraw, 1.0 - alpha);
    int rej_a = 0, rej_b = 0;
    for (int r = 0; r < R; ++r) {
      if (tstat[r] > cv_asym) ++rej_a;
      if (tstat[r] > cv_boot) ++rej_b;
    }
    const double pa = static_cast<double>(rej_a) / R;
    const double pb = static_cast<double>(rej_b) / R;
    rep.cells.push_back({"asymptotic", alpha, pa, mc_se(pa, R), 0.0});
    rep.cells.push_back({"bootstrap", alpha, pb, mc_se(pb, R), 0.0});
  }
  return rep;
}

McReport run_coverage_experiment(const McDesign& design, const std::vector<double>& levels,
                                 int R, int B, int n_quantile_points,
                                 const RngSeed& seed, const KernelSpec& kernel,
                                 MultiplierDist dist, int threads) {
  if (R < 1) throw DomainError("run_coverage_experiment: R must be >= 1");
  if (B < 1) throw DomainError("run_coverage_experiment: B must be >= 1");
  if (n_quantile_points < 2)
    throw DomainError("run_coverage_experiment: need >= 2 quantile points");
  const int n = design.n;
  const int L = static_cast<int>(levels.size());

  // covered[method][l][r]
  std::vector<std::vector<std::uint8_t>> cov_asym(L, std::vector<std::uint8_t>(R, 0));
  std::vector<std::vector<std::uint8_t>> cov_boot(L, std::vector<std::uint8_t>(R, 0));

  parallel_for(R, threads, [&](int r) {
    const Dataset ds = simulate_design(design, substream(seed, detail::kTagData, r));
    const auto gammas = threshold_grid(ds);
    const auto sd = detail::SortedData::make(ds);
    const auto cs = detail::CandidateSet::make(sd, gammas);
    const double a = default_bandwidth(ds);

    detail::LseWorkspace ws;
    const auto ef = detail::eval_fit(sd, cs, ds.y(), ds.X(), ds.q(), kernel.kind, a, ws);
    if (!(ef.xi_hat > 0.0))
      throw DegenerateFit("run_coverage_experiment: degenerate sample fit");

    const int G = cs.size();
    std::vector<double> scaled(G);
    for (int j = 0; j < G; ++j) scaled[j] = detail::scaled_stat_at(ef, j, n);
    const PiecewiseLinear sample_pl{cs.gammas, scaled};

    for (int l = 0; l < L; ++l) {
      const double T = limit_quantile(levels[l]);
      const auto ivs = sublevel_intervals(sample_pl,
                                          PiecewiseLinear{{cs.gammas.front()}, {T}});
      cov_asym[l][r] = contains_gamma(ivs, design.gamma0) ? 1 : 0;
    }

    // Grid bootstrap: B draws at each of P equidistant candidates; one set
    // of draws serves every confidence level.
    const int P = n_quantile_points;
    std::vector<double> points(P);
    for (int j = 0; j < P; ++j)
      points[j] = gammas.front() +
                  (gammas.back() - gammas.front()) * static_cast<double>(j) / (P - 1);

    std::vector<std::vector<double>> qcurves(L, std::vector<double>(P));
    std::vector<double> draws(B);
    Eigen::VectorXd eta, ystar;
    const RngSeed rep_seed = substream(seed, detail::kTagBoot, r);
    for (int j = 0; j < P; ++j) {
      auto with_target = gammas;
      with_target.push_back(points[j]);
      const auto csj = detail::CandidateSet::make(sd, with_target);
      const int target = static_cast<int>(
          std::lower_bound(csj.gammas.begin(), csj.gammas.end(), points[j]) -
          csj.gammas.begin());
      const Eigen::VectorXd fitted = detail::jump_fitted(
          ds.X(), ds.q(), ef.scan.beta, ef.scan.delta, points[j]);
      int degen = 0;
      for (int b = 0; b < B; ++b)
        draws[b] = detail::grid_boot_draw_retry(
            sd, csj, target, fitted, ef.scan.residuals, ds.X(), ds.q(), kernel.kind,
            a, dist, substream(rep_seed, j, b), ws, eta, ystar, &degen);
      std::sort(draws.begin(), draws.end());
      for (int l = 0; l < L; ++l) {
        auto idx = static_cast<long>(std::ceil(levels[l] * B - 1e-9));
        idx = std::clamp(idx, 1L, static_cast<long>(B));
        qcurves[l][j] = draws[idx - 1];
      }
    }
    for (int l = 0; l < L; ++l) {
      const auto ivs = sublevel_intervals(sample_pl,
                                          PiecewiseLinear{points, qcurves[l]});
      cov_boot[l][r] = contains_gamma(ivs, design.gamma0) ? 1 : 0;
    }
  });

  McReport rep;
  rep.design = design.tag();
  rep.n = n;
  rep.replications = R;
  rep.boot_reps = B;
  rep.seed = seed.seed;
  rep.warp_speed = false;
  for (int l = 0; l < L; ++l) {
    int ca = 0, cb = 0;
    for (int r = 0; r < R; ++r) {
      ca += cov_asym[l][r];
      cb += cov_boot[l][r];
    }
    const double pa = static_cast<double>(ca) / R;
    const double pb = static_cast<double>(cb) / R;
    rep.cells.push_back({"asymptotic", levels[l], pa, mc_se(pa, R), 0.0});
    rep.cells.push_back({"grid_bootstrap", levels[l], pb, mc_se(pb, R), 0.0});
  }
  return rep;
}

McReport run_power_experiment(const McDesign& design, const std::vector<double>& levels,
                              int R, const std::vector<double>& delta_multipliers,
                              const RngSeed& seed, const KernelSpec& kernel,
                              MultiplierDist dist, int threads) {
  if (R < 1) throw DomainError("run_power_experiment: R must be >= 1");
  if (delta_multipliers.empty())
    throw DomainError("run_power_experiment: need at least one delta multiplier");
  const int n = design.n;
  const int L = static_cast<int>(levels.size());

  McReport rep;
  rep.design = design.tag();
  rep.n = n;
  rep.replications = R;
  rep.boot_reps = 1;
  rep.seed = seed.seed;
  rep.warp_speed = true;

  for (std::size_t im = 0; im < delta_multipliers.size(); ++im) {
    McDesign d = design;
    d.delta_scale *= delta_multipliers[im];
    const RngSeed mseed = substream(seed, 0xA1F0 + im);

    std::vector<double> qn(R), qlr(R), qn_star(R), qlr_star(R);
    parallel_for(R, threads, [&](int r) {
      const Dataset ds = simulate_design(d, substream(mseed, detail::kTagData, r));
      const auto gammas = threshold_grid(ds);
      const auto sd = detail::SortedData::make(ds);
      const auto cs = detail::CandidateSet::make(sd, gammas);
      const auto hp = detail::HingePlan::make(ds, gammas);
      const double a = default_bandwidth(ds);

      detail::LseWorkspace lws;
      detail::ClseWorkspace cws;
      const auto ef = detail::eval_fit(sd, cs, ds.y(), ds.X(), ds.q(), kernel.kind, a, lws);
      const auto ks = detail::clse_scan(hp, ds.y(), cws, true);
      if (!(ef.ssr_hat > 0.0) || !(ef.xi_hat > 0.0))
        throw DegenerateFit("run_power_experiment: degenerate sample fit");
      const double stil = ks.profile(ks.winner);
      const int tilde_idx = ks.winner;  // same candidate ordering as cs
      qn[r] = std::max(0.0, n * (stil - ef.ssr_hat) / ef.ssr_hat);
      qlr[r] = detail::scaled_stat_at(ef, tilde_idx, n);

      // Warp-speed draw of both statistics with one multiplier vector.
      const Eigen::VectorXd fitted_kink = ds.y() - ks.residuals;
      const Eigen::VectorXd fitted_jump = detail::jump_fitted(
          ds.X(), ds.q(), ef.scan.beta, ef.scan.delta, cs.gammas[tilde_idx]);
      const Eigen::VectorXd& resid = ef.scan.residuals;
      const RngSeed bseed = substream(mseed, detail::kTagBoot, r);
      Eigen::VectorXd eta(n), ystar(n);
      const double inf = std::numeric_limits<double>::infinity();

      auto attempt = [&](const RngSeed& s, double& qn_out, double& qlr_out) {
        Rng rng(s);
        rng.fill_multipliers(eta, dist);
        ystar = fitted_kink + resid.cwiseProduct(eta);
        const auto ls = detail::lse_scan(sd, cs, ystar, lws, false);
        const double shat = ls.profile(ls.winner);
        const auto ks2 = detail::clse_scan(hp, ystar, cws, false);
        qn_out = shat > 0.0
                     ? std::max(0.0, n * (ks2.profile(ks2.winner) - shat) / shat)
                     : std::numeric_limits<double>::quiet_NaN();
        ystar = fitted_jump + resid.cwiseProduct(eta);
        const auto ef2 = detail::eval_fit(sd, cs, ystar, ds.X(), ds.q(), kernel.kind, a, lws);
        qlr_out = detail::scaled_stat_at(ef2, tilde_idx, n);
      };
      double qb, lb;
      attempt(bseed, qb, lb);
      if (std::isnan(qb) || std::isnan(lb)) {
        attempt(substream(bseed, detail::kTagRetry), qb, lb);
        if (std::isnan(qb)) qb = inf;
        if (std::isnan(lb)) lb = inf;
      }
      qn_star[r] = qb;
      qlr_star[r] = lb;
    });

    for (int l = 0; l < L; ++l) {
      const double alpha = levels[l];
      const double cv_qn = order_statistic_quantile(qn_star, 1.0 - alpha);
      const double cv_qlr = order_statistic_quantile(qlr_star, 1.0 - alpha);
      int rq = 0, rl = 0;
      for (int r = 0; r < R; ++r) {
        if (qn[r] > cv_qn) ++rq;
        if (qlr[r] > cv_qlr) ++rl;
      }
      const double pq = static_cast<double>(rq) / R;
      const double pl = static_cast<double>(rl) / R;
      rep.cells.push_back({"q_n", alpha, pq, mc_se(pq, R), delta_multipliers[im]});
      rep.cells.push_back({"qlr_tilde", alpha, pl, mc_se(pl, R), delta_multipliers[im]});
    }
  }
  return rep;
}

}  // namespace threshreg
