// detail/boot_engine.hpp
//
// Shared internals of the wild-bootstrap engines.  A "draw" evaluates the
// rescaled profiled statistic on one resampled response; everything a draw
// needs besides the response is precomputed once per dataset/target so the
// Monte Carlo runners and the public bootstrap ops stay on one code path.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>

#include "threshreg/detail/scan.hpp"
#include "threshreg/detail/xi.hpp"
#include "threshreg/kernel.hpp"
#include "threshreg/rng.hpp"

namespace threshreg::detail {

// Stream tags for substream derivation (arbitrary distinct constants).
inline constexpr std::uint64_t kTagData = 0xDA7A;
inline constexpr std::uint64_t kTagBoot = 0xB007;
inline constexpr std::uint64_t kTagRetry = 0x9E88;

// Sample-side LSE evaluation on a candidate set: profile, winner
// coefficients, residuals and the kernel scale factor.  xi_hat is NaN when
// the fit or the local moments are degenerate.
struct EvalFit {
  LseScanResult scan;
  double gamma_hat = 0.0;
  double ssr_hat = 0.0;
  double xi_hat = std::numeric_limits<double>::quiet_NaN();
};

inline EvalFit eval_fit(const SortedData& sd, const CandidateSet& cs,
                        const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                        const Eigen::VectorXd& q, KernelKind kind,
                        double bandwidth, LseWorkspace& ws) {
  EvalFit ef;
  ef.scan = lse_scan(sd, cs, y, ws, true);
  ef.gamma_hat = cs.gammas[ef.scan.winner];
  ef.ssr_hat = ef.scan.profile(ef.scan.winner);
  if (ef.scan.rank_ok && ef.ssr_hat > 0.0) {
    const auto parts = xi_parts(X, q, ef.scan.residuals, ef.scan.delta,
                                ef.gamma_hat, kind, bandwidth);
    ef.xi_hat = xi_value(parts, ef.ssr_hat);
  }
  return ef;
}

// Rescaled statistic at candidate index j; NaN when degenerate.
inline double scaled_stat_at(const EvalFit& ef, int j, int n) {
  if (!(ef.xi_hat > 0.0) || !(ef.ssr_hat > 0.0))
    return std::numeric_limits<double>::quiet_NaN();
  const double qlr = n * (ef.scan.profile(j) - ef.ssr_hat) / ef.ssr_hat;
  return qlr / ef.xi_hat;
}

// Scale factor for the profiled statistic at a kink location: the jump
// direction implied by a kink at gamma is proportional to (q - gamma), so
// the weights become (q_t - gamma)^2 K((q_t - gamma)/a) and the slope
// coefficient cancels between numerator and denominator.  NaN when the
// kernel window or the SSR is degenerate.
inline double xi_kink(const Eigen::VectorXd& q, const Eigen::VectorXd& resid,
                      double gamma, KernelKind kind, double bandwidth, double ssr) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index t = 0; t < q.size(); ++t) {
    const double d = q(t) - gamma;
    const double w = d * d * kernel_value(kind, d / bandwidth);
    num += w * resid(t) * resid(t);
    den += w;
  }
  if (!(den > 0.0) || !(ssr > 0.0))
    return std::numeric_limits<double>::quiet_NaN();
  return num / (ssr * den);
}

// One kink-null resample pushed through both continuity statistics.  Q* is
// the constrained-vs-unconstrained SSR gap of the resample; the companion
// statistic takes the resample's profile at tilde_idx and studentizes it
// with xi_kink at the resample's own constrained winner, mirroring how the
// sample statistic is studentized at gamma_tilde.  NaNs flag a degenerate
// resample; the caller owns the retry policy.
struct KinkPair {
  double qn = std::numeric_limits<double>::quiet_NaN();
  double qlr = std::numeric_limits<double>::quiet_NaN();
};

inline KinkPair kink_pair_draw(const SortedData& sd, const CandidateSet& cs,
                               const HingePlan& hp, int tilde_idx,
                               const Eigen::VectorXd& fitted_kink,
                               const Eigen::VectorXd& resid, const Eigen::VectorXd& q,
                               KernelKind kind, double bandwidth, MultiplierDist dist,
                               const RngSeed& seed, LseWorkspace& lws,
                               ClseWorkspace& cws, Eigen::VectorXd& eta,
                               Eigen::VectorXd& ystar) {
  KinkPair out;
  Rng rng(seed);
  eta.resize(fitted_kink.size());
  rng.fill_multipliers(eta, dist);
  ystar = fitted_kink + resid.cwiseProduct(eta);
  const auto ls = lse_scan(sd, cs, ystar, lws, false);
  const double shat = ls.profile(ls.winner);
  if (!(shat > 0.0)) return out;
  const auto ks = clse_scan(hp, ystar, cws, true);
  const int n = sd.n;
  out.qn = std::max(0.0, n * (ks.profile(ks.winner) - shat) / shat);
  const double xi =
      xi_kink(q, ks.residuals, cs.gammas[ks.winner], kind, bandwidth, shat);
  if (xi > 0.0)
    out.qlr = std::max(0.0, n * (ls.profile(tilde_idx) - shat) / shat) / xi;
  return out;
}

// Fitted values of the jump model (beta, delta) with the break at gamma.
inline Eigen::VectorXd jump_fitted(const Eigen::MatrixXd& X, const Eigen::VectorXd& q,
                                   const Eigen::VectorXd& beta,
                                   const Eigen::VectorXd& delta, double gamma) {
  Eigen::VectorXd f = X * beta;
  const Eigen::VectorXd fd = X * delta;
  for (Eigen::Index t = 0; t < X.rows(); ++t)
    if (q(t) > gamma) f(t) += fd(t);
  return f;
}

// One grid-bootstrap draw of the rescaled statistic at target: resample
// y* = fitted + resid .* eta, refit over cs, evaluate at cs index target.
// NaN on a degenerate resample.
inline double grid_boot_draw(const SortedData& sd, const CandidateSet& cs, int target,
                             const Eigen::VectorXd& fitted, const Eigen::VectorXd& resid,
                             const Eigen::MatrixXd& X, const Eigen::VectorXd& q,
                             KernelKind kind, double bandwidth, MultiplierDist dist,
                             const RngSeed& seed, LseWorkspace& ws,
                             Eigen::VectorXd& eta, Eigen::VectorXd& ystar) {
  Rng rng(seed);
  eta.resize(fitted.size());
  rng.fill_multipliers(eta, dist);
  ystar = fitted + resid.cwiseProduct(eta);
  const EvalFit ef = eval_fit(sd, cs, ystar, X, q, kind, bandwidth, ws);
  return scaled_stat_at(ef, target, sd.n);
}

// Draw with the standard degeneracy policy: one retry on a fresh stream,
// then +infinity (a sure exceedance) counted in *degenerate.
inline double grid_boot_draw_retry(const SortedData& sd, const CandidateSet& cs,
                                   int target, const Eigen::VectorXd& fitted,
                                   const Eigen::VectorXd& resid, const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& q, KernelKind kind,
                                   double bandwidth, MultiplierDist dist,
                                   const RngSeed& draw_seed, LseWorkspace& ws,
                                   Eigen::VectorXd& eta, Eigen::VectorXd& ystar,
                                   int* degenerate) {
  double v = grid_boot_draw(sd, cs, target, fitted, resid, X, q, kind, bandwidth,
                            dist, draw_seed, ws, eta, ystar);
  if (std::isnan(v)) {
    v = grid_boot_draw(sd, cs, target, fitted, resid, X, q, kind, bandwidth, dist,
                       substream(draw_seed, kTagRetry), ws, eta, ystar);
    if (std::isnan(v)) {
      v = std::numeric_limits<double>::infinity();
      if (degenerate) ++*degenerate;
    }
  }
  return v;
}

}  // namespace threshreg::detail
