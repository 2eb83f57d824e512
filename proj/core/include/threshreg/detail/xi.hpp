// detail/xi.hpp
//
// Allocation-free core of the kernel-weighted scale factor, shared by the
// public scale_factor and the bootstrap hot loops (which must not pay for
// struct assembly or exceptions per draw).

#pragma once

#include <Eigen/Dense>

#include "threshreg/kernel.hpp"

namespace threshreg::detail {

struct XiParts {
  double num = 0.0;   // (1/n) sum (delta'x_t)^2 e_t^2 K((q_t-g)/a)
  double den0 = 0.0;  // (1/n) sum (delta'x_t)^2 K((q_t-g)/a)
};

inline XiParts xi_parts(const Eigen::MatrixXd& X, const Eigen::VectorXd& q,
                        const Eigen::VectorXd& resid, const Eigen::VectorXd& delta,
                        double gamma, KernelKind kind, double bandwidth) {
  const auto n = X.rows();
  const auto k = X.cols();
  XiParts p;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double w = kernel_value(kind, (q(t) - gamma) / bandwidth);
    if (w == 0.0) continue;
    double jx = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) jx += X(t, c) * delta(c);
    const double jx2w = jx * jx * w;
    p.den0 += jx2w;
    p.num += jx2w * resid(t) * resid(t);
  }
  p.num /= static_cast<double>(n);
  p.den0 /= static_cast<double>(n);
  return p;
}

// xi = num / (ssr * den0); quiet NaN when undefined (hot-path callers treat
// NaN as a degenerate draw).
inline double xi_value(const XiParts& p, double ssr) {
  const double den = ssr * p.den0;
  if (!(den > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double xi = p.num / den;
  return xi > 0.0 ? xi : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace threshreg::detail
