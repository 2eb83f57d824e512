#include "threshreg/ols.hpp"

namespace threshreg {

OlsFit ols_solve(const Eigen::VectorXd& y, const Eigen::MatrixXd& Z) {
  const auto n = Z.rows(), p = Z.cols();
  if (y.size() != n)
    throw DimensionMismatch("ols_solve: y and Z row counts disagree");
  if (n < p)
    throw DimensionMismatch("ols_solve: fewer rows than columns");

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Z);
  OlsFit fit;
  fit.coef = cod.solve(y);
  fit.residuals = y - Z * fit.coef;
  fit.ssr = fit.residuals.squaredNorm() / static_cast<double>(n);
  fit.rank_ok = (cod.rank() == p);
  return fit;
}

}  // namespace threshreg
