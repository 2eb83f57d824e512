#include "threshreg/dataset.hpp"

#include <cmath>
#include <utility>

namespace threshreg {

Dataset::Dataset(Eigen::VectorXd y, Eigen::MatrixXd X)
    : y_(std::move(y)), X_(std::move(X)) {
  const auto n = y_.size();
  if (n == 0 || X_.rows() != n)
    throw InvalidDataset("dataset: y and X row counts disagree or are zero");
  if (X_.cols() < 2)
    throw InvalidDataset("dataset: need at least an intercept and the threshold column");
  if (!y_.allFinite() || !X_.allFinite())
    throw InvalidDataset("dataset: non-finite value in y or X");
  if ((X_.col(0).array() != 1.0).any())
    throw InvalidDataset("dataset: first regressor column must be identically 1");
}

ThetaJump ThetaKink::as_jump(int k) const {
  if (k < 2) throw DimensionMismatch("as_jump: k must be at least 2");
  ThetaJump out;
  out.beta = beta;
  out.delta = Eigen::VectorXd::Zero(k);
  out.delta(0) = -delta3 * gamma;
  out.delta(k - 1) = delta3;
  out.gamma = gamma;
  return out;
}

Eigen::MatrixXd build_regressors(const Dataset& ds, double gamma) {
  const int n = ds.n(), k = ds.k();
  Eigen::MatrixXd Z(n, 2 * k);
  Z.leftCols(k) = ds.X();
  Z.rightCols(k).setZero();
  for (int t = 0; t < n; ++t)
    if (ds.X()(t, k - 1) > gamma) Z.row(t).tail(k) = ds.X().row(t);
  return Z;
}

double ssr_unconstrained(const Dataset& ds, const ThetaJump& theta) {
  const int n = ds.n(), k = ds.k();
  if (theta.beta.size() != k || theta.delta.size() != k)
    throw DimensionMismatch("ssr_unconstrained: coefficient length != k");
  double acc = 0.0;
  for (int t = 0; t < n; ++t) {
    double m = ds.X().row(t).dot(theta.beta);
    if (ds.X()(t, k - 1) > theta.gamma) m += ds.X().row(t).dot(theta.delta);
    const double e = ds.y()(t) - m;
    acc += e * e;
  }
  return acc / n;
}

double ssr_kink(const Dataset& ds, const ThetaKink& theta) {
  const int n = ds.n(), k = ds.k();
  if (theta.beta.size() != k)
    throw DimensionMismatch("ssr_kink: coefficient length != k");
  double acc = 0.0;
  for (int t = 0; t < n; ++t) {
    const double q = ds.X()(t, k - 1);
    double m = ds.X().row(t).dot(theta.beta);
    if (q > theta.gamma) m += theta.delta3 * (q - theta.gamma);
    const double e = ds.y()(t) - m;
    acc += e * e;
  }
  return acc / n;
}

}  // namespace threshreg
