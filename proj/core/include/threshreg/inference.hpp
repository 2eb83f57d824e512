// inference.hpp
//
// Likelihood-ratio-style inference on the threshold.  The profiled
// statistic QLR_n(gamma) = n (S_n(gamma) - S_n(gamma_hat)) / S_n(gamma_hat),
// rescaled by a kernel-based factor xi_hat, is compared against the pivotal
// limit law with distribution function F(z) = (1 - exp(-z/2))^2; inverting
// over the grid yields asymptotic confidence sets for gamma.

#pragma once

#include <vector>

#include "threshreg/dataset.hpp"
#include "threshreg/estimators.hpp"
#include "threshreg/kernel.hpp"
#include "threshreg/util.hpp"

namespace threshreg {

struct QlrCurve {
  std::vector<double> gammas;
  std::vector<double> values;  // QLR_n(gamma_j) >= 0, zero at gamma_hat
  double gamma_hat = 0.0;
  double ssr_hat = 0.0;
};

// The profiled statistic along the fit's grid.  Throws DegenerateFit when
// ssr_hat is not strictly positive.
QlrCurve qlr_curve(const Dataset& ds, const FitUnconstrained& fit);

// Limit distribution F(z) = (1 - exp(-z/2))^2, z >= 0, and its inverse
// F^{-1}(s) = -2 log(1 - sqrt(s)).  limit_cdf throws DomainError for z < 0;
// limit_quantile for s outside (0,1).
double limit_cdf(double z);
double limit_quantile(double s);

struct ScaleFactor {
  double xi_hat = 0.0;   // > 0
  double bandwidth = 0.0;
  double numerator = 0.0;     // (1/n) sum (delta'x)^2 e^2 K(.)
  double denominator = 0.0;   // ssr_hat * (1/n) sum (delta'x)^2 K(.)
};

// Kernel-weighted variance ratio at the estimated threshold,
//   xi_hat = sum (delta'x_t)^2 e_t^2 K((q_t-g)/a)
//            / [ S_n * sum (delta'x_t)^2 K((q_t-g)/a) ].
// Throws ZeroDenominator when no kernel mass or a degenerate jump leaves
// the denominator non-positive, DegenerateFit for ssr_hat <= 0.
ScaleFactor scale_factor(const Dataset& ds, const FitUnconstrained& fit,
                         const KernelSpec& kernel = {});

// Heteroskedasticity-robust sandwich covariance of the stacked slope
// estimates (beta, delta) at gamma_hat: M^{-1} Omega M^{-1} / n.  Throws
// SingularMoment when the moment matrix is singular.
Eigen::MatrixXd slope_covariance(const Dataset& ds, const FitUnconstrained& fit);

// Generalised form for an arbitrary design/residual pair (used for the
// constrained fit's slopes as well).
Eigen::MatrixXd sandwich_covariance(const Eigen::MatrixXd& Z,
                                    const Eigen::VectorXd& residuals);

struct ConfidenceSet {
  double level = 0.0;
  std::vector<GammaInterval> intervals;  // disjoint, ascending; may be empty
  double threshold = 0.0;                // F^{-1}(level)
};

// {gamma : QLR_n(gamma)/xi_hat <= F^{-1}(s)} as a union of intervals with
// linear interpolation at the crossings.  Contains gamma_hat by
// construction.  Throws DomainError for s outside (0,1).
ConfidenceSet asymptotic_confidence_set(const QlrCurve& curve,
                                        const ScaleFactor& xi, double s);

}  // namespace threshreg
