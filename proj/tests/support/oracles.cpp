#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

namespace {

double ssr_of(const Eigen::VectorXd& y, const Eigen::MatrixXd& Z,
              Eigen::VectorXd* coef_out) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Z);
  const Eigen::VectorXd b = cod.solve(y);
  if (coef_out) *coef_out = b;
  return (y - Z * b).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace

BruteJump brute_lse(const Dataset& ds, const std::vector<double>& gammas) {
  const int k = ds.k();
  BruteJump best;
  best.profile.reserve(gammas.size());
  double best_ssr = std::numeric_limits<double>::infinity();
  for (const double g : gammas) {
    const Eigen::MatrixXd Z = threshreg::build_regressors(ds, g);
    Eigen::VectorXd b;
    const double s = ssr_of(ds.y(), Z, &b);
    best.profile.push_back(s);
    if (s < best_ssr) {
      best_ssr = s;
      best.gamma = g;
      best.beta = b.head(k);
      best.delta = b.tail(k);
      best.ssr = s;
    }
  }
  return best;
}

BruteKink brute_clse(const Dataset& ds, const std::vector<double>& gammas) {
  const int n = ds.n(), k = ds.k();
  const Eigen::VectorXd q = ds.q();
  BruteKink best;
  best.profile.reserve(gammas.size());
  double best_ssr = std::numeric_limits<double>::infinity();
  for (const double g : gammas) {
    Eigen::MatrixXd H(n, k + 1);
    H.leftCols(k) = ds.X();
    for (int t = 0; t < n; ++t) H(t, k) = q(t) > g ? q(t) - g : 0.0;
    Eigen::VectorXd b;
    const double s = ssr_of(ds.y(), H, &b);
    best.profile.push_back(s);
    if (s < best_ssr) {
      best_ssr = s;
      best.gamma = g;
      best.beta = b.head(k);
      best.delta3 = b(k);
      best.ssr = s;
    }
  }
  return best;
}

double invert_limit_cdf(double s) {
  auto F = [](double z) {
    const double u = 1.0 - std::exp(-z / 2.0);
    return u * u;
  };
  double lo = 0.0, hi = 200.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (F(mid) < s)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double quadrature_kappa2(threshreg::KernelKind kind) {
  const bool gaussian = kind == threshreg::KernelKind::gaussian;
  const double lo = gaussian ? -10.0 : -1.0;
  const double hi = -lo;
  const int m = 20000;  // even
  const double h = (hi - lo) / m;
  auto f = [&](double u) {
    return u * u * threshreg::kernel_value(kind, u);
  };
  double acc = f(lo) + f(hi);
  for (int i = 1; i < m; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

double xi_direct(const Eigen::MatrixXd& X, const Eigen::VectorXd& q,
                 const Eigen::VectorXd& residuals, const Eigen::VectorXd& delta,
                 double gamma, threshreg::KernelKind kind, double bandwidth,
                 double ssr) {
  const auto n = static_cast<int>(q.size());
  double num = 0.0, den = 0.0;
  for (int t = 0; t < n; ++t) {
    const double w = threshreg::kernel_value(kind, (q(t) - gamma) / bandwidth);
    const double jx = X.row(t).dot(delta);
    num += jx * jx * residuals(t) * residuals(t) * w;
    den += jx * jx * w;
  }
  num /= n;
  den /= n;
  return num / (ssr * den);
}

Eigen::MatrixXd sandwich_direct(const Eigen::MatrixXd& Z,
                                const Eigen::VectorXd& residuals) {
  const auto n = static_cast<int>(Z.rows());
  const auto p = static_cast<int>(Z.cols());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd Om = Eigen::MatrixXd::Zero(p, p);
  for (int t = 0; t < n; ++t) {
    const Eigen::VectorXd z = Z.row(t).transpose();
    M += z * z.transpose();
    Om += z * z.transpose() * residuals(t) * residuals(t);
  }
  M /= n;
  Om /= n;
  const Eigen::MatrixXd Mi = M.inverse();
  return Mi * Om * Mi / n;
}

Dataset random_dataset(threshreg::Rng& rng, const RandomSpec& spec) {
  const int n = spec.n, k = spec.k;
  Eigen::MatrixXd X(n, k);
  X.col(0).setOnes();
  for (int j = 1; j + 1 < k; ++j)
    for (int t = 0; t < n; ++t) X(t, j) = rng.normal();
  Eigen::VectorXd q(n);
  for (int t = 0; t < n; ++t) {
    q(t) = 2.0 * rng.normal();
    if (spec.ties) q(t) = std::round(q(t) * 10.0) / 10.0;
  }
  X.col(k - 1) = q;

  Eigen::VectorXd beta(k), delta(k);
  for (int j = 0; j < k; ++j) {
    beta(j) = rng.normal();
    delta(j) = spec.jump * rng.normal();
  }
  // A mid-range threshold so both regimes are populated.
  std::vector<double> sorted(q.data(), q.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const double g0 = sorted[n / 2];

  Eigen::VectorXd y(n);
  for (int t = 0; t < n; ++t) {
    y(t) = X.row(t).dot(beta) + spec.noise * rng.normal();
    if (q(t) > g0) y(t) += X.row(t).dot(delta);
  }
  return Dataset(std::move(y), std::move(X));
}

}  // namespace oracle
