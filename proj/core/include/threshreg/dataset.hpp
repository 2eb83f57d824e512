// dataset.hpp
//
// Regression sample and parameter bundles for the two-regime model
//
//   y_t = beta'x_t + delta'x_t 1{q_t > gamma} + eps_t
//
// where x_t = (1, x_t2', q_t)': the first regressor is an intercept and the
// threshold variable q_t is the last regressor column.  Observations with
// q_t == gamma belong to the lower regime (the indicator is strict).

#pragma once

#include <Eigen/Dense>

#include "threshreg/errors.hpp"

namespace threshreg {

class Dataset {
 public:
  // Validates the structural layout: X has an all-ones first column, the
  // last column of X equals q elementwise, dimensions agree, all finite.
  Dataset(Eigen::VectorXd y, Eigen::MatrixXd X);

  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::MatrixXd& X() const { return X_; }
  // The threshold variable (a view of the last regressor column).
  Eigen::VectorXd q() const { return X_.col(X_.cols() - 1); }

  int n() const { return static_cast<int>(y_.size()); }
  int k() const { return static_cast<int>(X_.cols()); }

 private:
  Eigen::VectorXd y_;
  Eigen::MatrixXd X_;
};

// Unconstrained ("jump") parameters: theta = (beta, delta, gamma).
struct ThetaJump {
  Eigen::VectorXd beta;
  Eigen::VectorXd delta;
  double gamma = 0.0;
};

// Continuity-constrained ("kink") parameters.  The regression function is
// beta'x_t + delta3 * (q_t - gamma) * 1{q_t > gamma}, which is continuous in
// q by construction; it corresponds to a ThetaJump with
// delta = (-delta3*gamma, 0, ..., 0, delta3).
struct ThetaKink {
  Eigen::VectorXd beta;
  double delta3 = 0.0;
  double gamma = 0.0;

  // The jump parameterisation this kink implies (k = number of regressors).
  ThetaJump as_jump(int k) const;
};

// Interacted design: row t of the result is (x_t', x_t' * 1{q_t > gamma}),
// an n x 2k matrix.  Strict inequality, so q_t == gamma rows have zeros in
// the right-hand block.
Eigen::MatrixXd build_regressors(const Dataset& ds, double gamma);

// Mean squared residual (1/n scaling) of theta on the sample.
double ssr_unconstrained(const Dataset& ds, const ThetaJump& theta);
double ssr_kink(const Dataset& ds, const ThetaKink& theta);

}  // namespace threshreg
