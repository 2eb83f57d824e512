// montecarlo.hpp
//
// Simulation designs and experiment runners.  The designs share the error
// process eps_t = |q_t| e_t (conditionally heteroskedastic, E[eps^2|q]=q^2)
// with iid standard normal e_t:
//
//   A: y = 2 + 3 x + delta * x * 1{q > gamma0},  x ~ N(mu,1) extra regressor
//   B: y = 2 + 3 q + delta * q * 1{q > gamma0}   (jump in the q slope)
//   C: design B with gamma0 = 0 and fixed delta (a kink-magnitude jump)
//   D: y = 2 + 3 q + delta * q * 1{t/n > gamma0} (break at a sample fraction)
//
// Bootstrap-calibrated rejection rates use the warp-speed device: one
// bootstrap draw per replication, critical values from the pooled draws.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "threshreg/bootstrap.hpp"
#include "threshreg/dataset.hpp"
#include "threshreg/rng.hpp"

namespace threshreg {

struct McDesign {
  enum class Kind { A, B, C, D };
  Kind kind = Kind::B;
  int n = 250;
  double gamma0 = 2.0;      // threshold on the q scale (designs A-C) or the
                            // unit time scale (design D)
  double q_mean = 2.0;
  // delta = delta_scale * n^(-phi); phi = 0 makes delta fixed.
  double delta_scale = 1.0;
  double phi = 0.0;

  double delta() const;     // resolved for this n
  std::string tag() const;  // "A", "B", "C", "D"

  static McDesign design_A(int n, double gamma0 = 2.0);
  static McDesign design_B(int n, double gamma0 = 2.0);
  static McDesign design_C(int n, double q_mean = 0.0);
  static McDesign design_D(int n, double gamma0_fraction = 0.5);
};

// One draw of the design (columns: intercept, extra regressors, threshold
// variable last, per the Dataset layout).
Dataset simulate_design(const McDesign& design, const RngSeed& seed);

// One row of a Monte Carlo report: an estimated probability with its
// simulation standard error.
struct McCell {
  std::string method;   // e.g. "asymptotic", "bootstrap", "q_n", "qlr_tilde"
  double level = 0.0;   // nominal level (size/power) or coverage target
  double estimate = 0.0;
  double mc_se = 0.0;
  double extra = 0.0;   // context-dependent (e.g. delta multiplier)
};

struct McReport {
  std::string design;
  int n = 0;
  int replications = 0;
  int boot_reps = 0;
  std::uint64_t seed = 0;
  bool warp_speed = false;
  std::vector<McCell> cells;
};

// Size of the rescaled profiled test of gamma = gamma0, asymptotic and
// warp-speed grid-bootstrap calibrations side by side.
McReport run_size_experiment(const McDesign& design, const std::vector<double>& levels,
                             int R, const RngSeed& seed,
                             const KernelSpec& kernel = {},
                             MultiplierDist dist = MultiplierDist::rademacher,
                             int threads = 0);

// Coverage of the asymptotic and grid-bootstrap confidence sets for gamma0.
// The bootstrap set uses B draws per replication at n_quantile_points
// equidistant candidates.
McReport run_coverage_experiment(const McDesign& design, const std::vector<double>& levels,
                                 int R, int B, int n_quantile_points,
                                 const RngSeed& seed, const KernelSpec& kernel = {},
                                 MultiplierDist dist = MultiplierDist::rademacher,
                                 int threads = 0);

// Rejection rates of the two continuity tests under the design as given,
// with the jump scaled by each multiplier in turn (0 = null when the design
// is continuous there).  Warp-speed wild bootstrap calibration.
McReport run_power_experiment(const McDesign& design, const std::vector<double>& levels,
                              int R, const std::vector<double>& delta_multipliers,
                              const RngSeed& seed, const KernelSpec& kernel = {},
                              MultiplierDist dist = MultiplierDist::rademacher,
                              int threads = 0);

}  // namespace threshreg
