// bootstrap.hpp
//
// Wild-bootstrap inference.  Two engines share the resampling core:
//
//  * continuity_test_bootstrap imposes the kink null: y* = constrained
//    fitted values + unconstrained residuals * multipliers, then recomputes
//    both continuity statistics on each resample.  For calibration the
//    profiled-statistic test is studentized with the kink-direction scale
//    factor (on the sample at gamma_tilde, on each resample at its own
//    constrained winner), which keeps the comparison pivotal under the null;
//  * the grid bootstrap fixes a candidate gamma_j, generates y* from the
//    model refit at gamma_j (its fitted values and its residuals), and
//    records the rescaled profiled statistic at gamma_j on each resample,
//    giving a per-candidate null quantile; inverting the curve of quantiles
//    yields a confidence set.

#pragma once

#include <vector>

#include "threshreg/continuity.hpp"
#include "threshreg/estimators.hpp"
#include "threshreg/grid.hpp"
#include "threshreg/inference.hpp"
#include "threshreg/kernel.hpp"
#include "threshreg/rng.hpp"

namespace threshreg {

// y* = fitted + residuals .* eta with iid multipliers eta from dist.
Eigen::VectorXd wild_resample(const Eigen::VectorXd& fitted,
                              const Eigen::VectorXd& residuals,
                              MultiplierDist dist, const RngSeed& seed);

struct ContinuityBootstrap {
  ContinuityStat sample;        // statistics on the original data
  double qlr_studentized = 0.0; // max(0, QLR_n(gamma_tilde)) / xi_tilde
  double xi_tilde = 0.0;        // kink-direction scale factor at gamma_tilde
  double p_qn = 0.0;            // share of resamples with Q* >= Q_n
  double p_qlr = 0.0;           // share with studentized QLR* >= sample value
  int B = 0;
  int degenerate = 0;           // resamples counted as exceedances after a retry
  std::vector<double> draws_qn;   // the B bootstrap statistics
  std::vector<double> draws_qlr;  // studentized scale
};

// Wild bootstrap of both continuity tests.  One multiplier vector per
// replication feeds both statistics.  threads = 0 means one worker.
ContinuityBootstrap continuity_test_bootstrap(
    const Dataset& ds, int B, MultiplierDist dist, const RngSeed& seed,
    const GridSpec& grid = {}, const KernelSpec& kernel = {}, int threads = 0);

// All B grid-bootstrap draws of the rescaled statistic at gamma_j (building
// block for quantiles and for warp-speed size experiments).
std::vector<double> grid_bootstrap_draws(const Dataset& ds, double gamma_j,
                                         int B, const KernelSpec& kernel,
                                         MultiplierDist dist, const RngSeed& seed,
                                         const GridSpec& grid = {}, int threads = 0);

// ceil(s*B)-th order statistic of those draws.  B >= 1 (B = 1 returns the
// single draw); gamma_j must lie inside the grid's span.
double grid_quantile_at(const Dataset& ds, double gamma_j, double s, int B,
                        const KernelSpec& kernel = {},
                        MultiplierDist dist = MultiplierDist::rademacher,
                        const RngSeed& seed = {}, const GridSpec& grid = {},
                        int threads = 0);

struct QuantileCurve {
  std::vector<double> gammas;     // quantile evaluation points, ascending
  std::vector<double> quantiles;  // q*_n(s | gamma_j), each >= 0
  double level = 0.0;
  int B = 0;                      // >= 39 when built via grid_bootstrap_ci
};

struct GridBootstrapCi {
  double level = 0.0;
  std::vector<GammaInterval> intervals;  // may be empty (reported as such)
  QuantileCurve quantiles;
  QlrCurve sample_curve;                 // unscaled profiled statistic
  std::vector<double> sample_scaled;     // QLR_n(gamma_j)/xi_hat on the grid
  ScaleFactor xi;
  double gamma_hat = 0.0;
  int degenerate = 0;
};

struct GridBootstrapOptions {
  double level = 0.95;
  std::vector<double> quantile_points;  // empty: equidistant + estimates
  int n_quantile_points = 10;           // used when quantile_points is empty
  bool augment_with_estimates = true;   // add gamma_hat and gamma_tilde
  int B = 399;
  KernelSpec kernel;
  MultiplierDist dist = MultiplierDist::rademacher;
  RngSeed seed;
  GridSpec grid;
  int threads = 0;
};

// Confidence set {gamma : QLR_n(gamma)/xi_hat <= q*_n(s|gamma)} with both
// curves linearly interpolated between their evaluation points.
GridBootstrapCi grid_bootstrap_ci(const Dataset& ds, const GridBootstrapOptions& opt);

}  // namespace threshreg
