#include "threshreg/continuity.hpp"

#include <algorithm>
#include <cmath>

namespace threshreg {

ContinuityStat continuity_statistics(const Dataset& ds, const GridSpec& grid,
                                     const KernelSpec& kernel) {
  const auto gammas = threshold_grid(ds, grid);
  ContinuityStat out;
  out.lse = fit_lse(ds, gammas);
  out.clse = fit_clse(ds, gammas);
  if (!(out.lse.ssr_hat > 0.0))
    throw DegenerateFit("continuity_statistics: unconstrained fit is exact");

  const double n = ds.n();
  out.gamma_hat = out.lse.theta.gamma;
  out.gamma_tilde = out.clse.theta.gamma;
  out.ssr_hat = out.lse.ssr_hat;
  out.ssr_tilde = out.clse.ssr_tilde;
  out.q_n = std::max(0.0, n * (out.ssr_tilde - out.ssr_hat) / out.ssr_hat);

  const ScaleFactor xi = scale_factor(ds, out.lse, kernel);
  out.xi_hat = xi.xi_hat;

  // gamma_tilde comes from the same grid, so the nearest profile point is
  // an exact match; keep the snap distance as a diagnostic anyway.
  std::size_t jbest = 0;
  double dbest = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < out.lse.profile.size(); ++j) {
    const double d = std::abs(out.lse.profile[j].first - out.gamma_tilde);
    if (d < dbest) {
      dbest = d;
      jbest = j;
    }
  }
  out.snap_distance = dbest;
  const double s_at_tilde = out.lse.profile[jbest].second;
  const double qlr = n * (s_at_tilde - out.ssr_hat) / out.ssr_hat;
  out.qlr_tilde = std::max(0.0, qlr) / out.xi_hat;
  return out;
}

ContinuityStat qn_statistic(const Dataset& ds, const GridSpec& grid) {
  return continuity_statistics(ds, grid, KernelSpec{});
}

ContinuityStat qlr_tilde_statistic(const Dataset& ds, const GridSpec& grid,
                                   const KernelSpec& kernel) {
  return continuity_statistics(ds, grid, kernel);
}

}  // namespace threshreg
