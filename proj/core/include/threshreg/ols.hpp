// ols.hpp
//
// Plain least squares, used for winner refits and as the building block the
// exhaustive reference implementations in the tests lean on.

#pragma once

#include <Eigen/Dense>

#include "threshreg/errors.hpp"

namespace threshreg {

struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd residuals;
  double ssr = 0.0;     // mean squared residual (1/n scaling)
  bool rank_ok = true;  // design had full column rank
};

// Minimum-norm least squares of y on Z via a rank-revealing complete
// orthogonal decomposition.  Throws DimensionMismatch when rows disagree or
// n < p.  A rank-deficient design is reported through rank_ok, not thrown:
// the SSR is still the least-squares minimum.
OlsFit ols_solve(const Eigen::VectorXd& y, const Eigen::MatrixXd& Z);

}  // namespace threshreg
