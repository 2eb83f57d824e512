#include "threshreg/estimators.hpp"

#include <algorithm>

#include "threshreg/detail/scan.hpp"
#include "threshreg/ols.hpp"

namespace threshreg {

namespace {

std::pair<int, int> regime_sizes(const Dataset& ds, double gamma) {
  int up = 0;
  const Eigen::VectorXd q = ds.q();
  for (int t = 0; t < ds.n(); ++t)
    if (q(t) > gamma) ++up;
  return {ds.n() - up, up};
}

}  // namespace

FitUnconstrained fit_lse(const Dataset& ds, const std::vector<double>& gammas) {
  const auto sd = detail::SortedData::make(ds);
  const auto cs = detail::CandidateSet::make(sd, gammas);
  detail::LseWorkspace ws;
  const auto scan = detail::lse_scan(sd, cs, ds.y(), ws, false);

  const int k = ds.k();
  const double gamma_hat = cs.gammas[scan.winner];
  // Winner refit with a rank-revealing solve: coefficients and residuals
  // come from here, the stored ssr_hat stays the scan's profile minimum.
  const OlsFit refit = ols_solve(ds.y(), build_regressors(ds, gamma_hat));
  if (!refit.rank_ok)
    throw RankDeficient("fit_lse: winning design is rank-deficient");

  FitUnconstrained fit;
  fit.theta.beta = refit.coef.head(k);
  fit.theta.delta = refit.coef.tail(k);
  fit.theta.gamma = gamma_hat;
  fit.ssr_hat = scan.profile(scan.winner);
  fit.profile.reserve(cs.size());
  for (int j = 0; j < cs.size(); ++j)
    fit.profile.emplace_back(cs.gammas[j], scan.profile(j));
  fit.residuals = refit.residuals;
  std::tie(fit.n_lower, fit.n_upper) = regime_sizes(ds, gamma_hat);
  return fit;
}

FitConstrained fit_clse(const Dataset& ds, const std::vector<double>& gammas) {
  const auto hp = detail::HingePlan::make(ds, gammas);
  if (!hp.x_full_rank)
    throw RankDeficient("fit_clse: regressor matrix is rank-deficient");
  detail::ClseWorkspace ws;
  const auto scan = detail::clse_scan(hp, ds.y(), ws, false);

  const int n = ds.n(), k = ds.k();
  const double gamma_tilde = hp.gammas[scan.winner];
  Eigen::MatrixXd Z(n, k + 1);
  Z.leftCols(k) = ds.X();
  const Eigen::VectorXd q = ds.q();
  for (int t = 0; t < n; ++t)
    Z(t, k) = q(t) > gamma_tilde ? q(t) - gamma_tilde : 0.0;
  const OlsFit refit = ols_solve(ds.y(), Z);
  if (!refit.rank_ok)
    throw RankDeficient("fit_clse: winning design is rank-deficient");

  FitConstrained fit;
  fit.theta.beta = refit.coef.head(k);
  fit.theta.delta3 = refit.coef(k);
  fit.theta.gamma = gamma_tilde;
  fit.ssr_tilde = scan.profile(scan.winner);
  fit.profile.reserve(hp.gammas.size());
  for (std::size_t j = 0; j < hp.gammas.size(); ++j)
    fit.profile.emplace_back(hp.gammas[j], scan.profile(static_cast<int>(j)));
  fit.residuals = refit.residuals;
  std::tie(fit.n_lower, fit.n_upper) = regime_sizes(ds, gamma_tilde);
  return fit;
}

FitUnconstrained fit_lse(const Dataset& ds, const GridSpec& grid) {
  return fit_lse(ds, threshold_grid(ds, grid));
}

FitConstrained fit_clse(const Dataset& ds, const GridSpec& grid) {
  return fit_clse(ds, threshold_grid(ds, grid));
}

}  // namespace threshreg
