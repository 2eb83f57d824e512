// util.hpp
//
// Small numeric helpers shared across modules: empirical quantiles,
// order-statistic quantiles for bootstrap draws, piecewise-linear curves
// and sub-level-set extraction used by the confidence-set builders.

#pragma once

#include <span>
#include <vector>

namespace threshreg {

// Empirical quantile with linear interpolation between order statistics
// (the common "type 7" convention): h = p*(m-1) on the sorted sample.
double empirical_quantile(std::span<const double> values, double p);

// ceil(s*B)-th order statistic of B draws, the bootstrap quantile
// convention.  s in (0,1); a guard absorbs floating-point noise in s*B.
double order_statistic_quantile(std::span<const double> draws, double s);

// Interquartile range (type-7 quantiles).
double iqr(std::span<const double> values);

// A piecewise-linear function on sorted breakpoints, extended flat beyond
// the first/last breakpoint.
struct PiecewiseLinear {
  std::vector<double> x;  // strictly increasing
  std::vector<double> y;

  double eval(double at) const;
};

// One connected component of {gamma : curve(gamma) <= bound(gamma)}.
struct GammaInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool unbounded_lo = false;  // touches the lower domain edge
  bool unbounded_hi = false;  // touches the upper domain edge
};

// The sub-level set {gamma in [domain] : curve(gamma) <= bound(gamma)} as a
// union of disjoint intervals, crossings located by linear interpolation.
// The domain is [curve.x.front(), curve.x.back()]; intervals touching a
// domain edge are flagged unbounded on that side.
std::vector<GammaInterval> sublevel_intervals(const PiecewiseLinear& curve,
                                              const PiecewiseLinear& bound);

}  // namespace threshreg
