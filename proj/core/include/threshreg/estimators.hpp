// estimators.hpp
//
// Grid-search least squares for the threshold model: the unconstrained
// estimator profiles the interacted design over the candidate grid; the
// continuity-constrained estimator profiles the hinge design [X, (q-g)^+]
// over the same grid.  Ties in the profile go to the smallest candidate.

#pragma once

#include <utility>
#include <vector>

#include "threshreg/dataset.hpp"
#include "threshreg/grid.hpp"

namespace threshreg {

struct FitUnconstrained {
  ThetaJump theta;
  double ssr_hat = 0.0;                               // min of the profile
  std::vector<std::pair<double, double>> profile;     // (gamma_j, S_n(gamma_j))
  Eigen::VectorXd residuals;
  int n_lower = 0, n_upper = 0;                       // regime sizes at gamma_hat
};

struct FitConstrained {
  ThetaKink theta;
  double ssr_tilde = 0.0;                             // min of the profile
  std::vector<std::pair<double, double>> profile;
  Eigen::VectorXd residuals;
  int n_lower = 0, n_upper = 0;
};

// Unconstrained least squares over the candidate grid.  Throws EmptyGrid /
// TooFewRows via threshold_grid, RankDeficient when the winning design is
// rank-deficient.
FitUnconstrained fit_lse(const Dataset& ds, const GridSpec& grid = {});

// Continuity-constrained least squares over the same grid rule.
FitConstrained fit_clse(const Dataset& ds, const GridSpec& grid = {});

// Overloads taking an explicit candidate list (already validated), so the
// two estimators and any diagnostics can share one grid.
FitUnconstrained fit_lse(const Dataset& ds, const std::vector<double>& gammas);
FitConstrained fit_clse(const Dataset& ds, const std::vector<double>& gammas);

}  // namespace threshreg
