// continuity.hpp
//
// Test statistics for the null of a continuous (kink) threshold response
// against a discontinuous (jump) alternative.  Both statistics come from
// one pair of fits on a shared grid:
//
//   Q_n          = n (S_tilde - S_hat) / S_hat, the constrained-vs-
//                  unconstrained SSR gap;
//   QLR_n(g~)/xi = the profiled statistic evaluated at the constrained
//                  estimate gamma_tilde, rescaled like a confidence-set cut.

#pragma once

#include "threshreg/estimators.hpp"
#include "threshreg/inference.hpp"

namespace threshreg {

struct ContinuityStat {
  double q_n = 0.0;          // >= 0
  double qlr_tilde = 0.0;    // >= 0, already scaled by 1/xi_hat
  double gamma_hat = 0.0;
  double gamma_tilde = 0.0;
  double ssr_hat = 0.0;
  double ssr_tilde = 0.0;
  double xi_hat = 0.0;
  double snap_distance = 0.0;  // |gamma_tilde - nearest grid point| (0 here)
  // The underlying fits, kept for diagnostics and for bootstrap DGPs.
  FitUnconstrained lse;
  FitConstrained clse;
};

// Both statistics from one pass.  Throws DegenerateFit when the
// unconstrained fit is exact (ssr_hat <= 0).
ContinuityStat continuity_statistics(const Dataset& ds, const GridSpec& grid = {},
                                     const KernelSpec& kernel = {});

// Convenience aliases for callers interested in a single statistic.
ContinuityStat qn_statistic(const Dataset& ds, const GridSpec& grid = {});
ContinuityStat qlr_tilde_statistic(const Dataset& ds, const GridSpec& grid = {},
                                   const KernelSpec& kernel = {});

}  // namespace threshreg
