#include "threshreg/inference.hpp"

#include <cmath>
#include <limits>

#include "threshreg/detail/xi.hpp"

namespace threshreg {

QlrCurve qlr_curve(const Dataset& ds, const FitUnconstrained& fit) {
  if (!(fit.ssr_hat > 0.0))
    throw DegenerateFit("qlr_curve: ssr_hat must be strictly positive");
  const double n = ds.n();
  QlrCurve curve;
  curve.gamma_hat = fit.theta.gamma;
  curve.ssr_hat = fit.ssr_hat;
  curve.gammas.reserve(fit.profile.size());
  curve.values.reserve(fit.profile.size());
  for (const auto& [g, s] : fit.profile) {
    curve.gammas.push_back(g);
    curve.values.push_back(n * (s - fit.ssr_hat) / fit.ssr_hat);
  }
  return curve;
}

double limit_cdf(double z) {
  if (z < 0.0) throw DomainError("limit_cdf: z must be >= 0");
  const double u = 1.0 - std::exp(-0.5 * z);
  return u * u;
}

double limit_quantile(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("limit_quantile: s outside (0,1)");
  return -2.0 * std::log(1.0 - std::sqrt(s));
}

ScaleFactor scale_factor(const Dataset& ds, const FitUnconstrained& fit,
                         const KernelSpec& kernel) {
  if (!(fit.ssr_hat > 0.0))
    throw DegenerateFit("scale_factor: ssr_hat must be strictly positive");
  const double a = resolve_bandwidth(ds, kernel);
  const auto parts = detail::xi_parts(ds.X(), ds.q(), fit.residuals,
                                      fit.theta.delta, fit.theta.gamma,
                                      kernel.kind, a);
  ScaleFactor out;
  out.bandwidth = a;
  out.numerator = parts.num;
  out.denominator = fit.ssr_hat * parts.den0;
  if (!(out.denominator > 0.0) || !std::isfinite(out.denominator))
    throw ZeroDenominator("scale_factor: no kernel mass near the threshold");
  out.xi_hat = parts.num / out.denominator;
  if (!(out.xi_hat > 0.0) || !std::isfinite(out.xi_hat))
    throw ZeroDenominator("scale_factor: degenerate local residual variance");
  return out;
}

Eigen::MatrixXd sandwich_covariance(const Eigen::MatrixXd& Z,
                                    const Eigen::VectorXd& residuals) {
  const auto n = Z.rows();
  const auto p = Z.cols();
  if (residuals.size() != n)
    throw DimensionMismatch("sandwich_covariance: residual length != rows");
  const double dn = static_cast<double>(n);
  const Eigen::MatrixXd M = Z.transpose() * Z / dn;
  const Eigen::MatrixXd Omega =
      Z.transpose() * residuals.array().square().matrix().asDiagonal() * Z / dn;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  if (qr.rank() < p)
    throw SingularMoment("sandwich_covariance: moment matrix is singular");
  const Eigen::MatrixXd Minv_Omega = qr.solve(Omega);
  const Eigen::MatrixXd cov = qr.solve(Minv_Omega.transpose()) / dn;
  return 0.5 * (cov + cov.transpose());
}

Eigen::MatrixXd slope_covariance(const Dataset& ds, const FitUnconstrained& fit) {
  return sandwich_covariance(build_regressors(ds, fit.theta.gamma), fit.residuals);
}

ConfidenceSet asymptotic_confidence_set(const QlrCurve& curve,
                                        const ScaleFactor& xi, double s) {
  const double T = limit_quantile(s);
  if (!(xi.xi_hat > 0.0))
    throw ZeroDenominator("asymptotic_confidence_set: xi_hat must be positive");
  PiecewiseLinear c{curve.gammas, {}};
  c.y.reserve(curve.values.size());
  for (double v : curve.values) c.y.push_back(v / xi.xi_hat);
  const PiecewiseLinear bound{{curve.gammas.front()}, {T}};
  ConfidenceSet out;
  out.level = s;
  out.threshold = T;
  out.intervals = sublevel_intervals(c, bound);
  return out;
}

}  // namespace threshreg
