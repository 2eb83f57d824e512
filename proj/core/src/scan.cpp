#include "threshreg/detail/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "threshreg/errors.hpp"

namespace threshreg::detail {

namespace {

constexpr double kRankTol = 1e-11;

// Rotate one observation (x, yv) into the packed triangular factor.
// R is k x k row-major with only the upper triangle used; z is the rotated
// response; rho2 accumulates the squared residual norm.  x is clobbered.
inline void givens_insert(double* R, double* z, double& rho2, double* x,
                          double yv, int k) {
  for (int i = 0; i < k; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    double* Ri = R + i * k;
    const double rii = Ri[i];
    const double r = std::sqrt(rii * rii + xi * xi);
    const double c = rii / r, s = xi / r;
    Ri[i] = r;
    for (int j = i + 1; j < k; ++j) {
      const double t = Ri[j], u = x[j];
      Ri[j] = c * t + s * u;
      x[j] = c * u - s * t;
    }
    const double t = z[i];
    z[i] = c * t + s * yv;
    yv = c * yv - s * t;
  }
  rho2 += yv * yv;
}

// Solve R b = z for the upper triangle accumulated above.  Near-zero
// diagonals flag rank deficiency; the corresponding coefficients are set
// to zero so downstream arithmetic stays finite.
inline bool back_solve(const double* R, const double* z, double* b, int k) {
  double maxdiag = 0.0;
  for (int i = 0; i < k; ++i) maxdiag = std::max(maxdiag, std::abs(R[i * k + i]));
  const double tol = kRankTol * maxdiag;
  bool ok = maxdiag > 0.0;
  for (int i = k - 1; i >= 0; --i) {
    double acc = z[i];
    const double* Ri = R + i * k;
    for (int j = i + 1; j < k; ++j) acc -= Ri[j] * b[j];
    if (std::abs(Ri[i]) <= tol) {
      b[i] = 0.0;
      ok = false;
    } else {
      b[i] = acc / Ri[i];
    }
  }
  return ok;
}

// Factor rows [lo, hi) of the sorted design against response ys.
inline void factor_range(const SortedData& sd, const Eigen::VectorXd& ys,
                         int lo, int hi, double* R, double* z, double* rowbuf) {
  const int k = sd.k;
  std::fill(R, R + k * k, 0.0);
  std::fill(z, z + k, 0.0);
  double rho2 = 0.0;
  for (int t = lo; t < hi; ++t) {
    for (int c = 0; c < k; ++c) rowbuf[c] = sd.Xt(c, t);
    givens_insert(R, z, rho2, rowbuf, ys(t), k);
  }
}

}  // namespace

SortedData SortedData::make(const Dataset& ds) {
  const int n = ds.n(), k = ds.k();
  if (k > kMaxCols)
    throw DimensionMismatch("scan: more regressors than supported");
  SortedData sd;
  sd.n = n;
  sd.k = k;
  sd.order.resize(n);
  std::iota(sd.order.begin(), sd.order.end(), 0);
  const Eigen::VectorXd q = ds.q();
  std::stable_sort(sd.order.begin(), sd.order.end(),
                   [&](int a, int b) { return q(a) < q(b); });
  sd.Xt.resize(k, n);
  sd.qs.resize(n);
  for (int t = 0; t < n; ++t) {
    sd.Xt.col(t) = ds.X().row(sd.order[t]).transpose();
    sd.qs(t) = q(sd.order[t]);
  }
  return sd;
}

CandidateSet CandidateSet::make(const SortedData& sd, std::vector<double> gammas) {
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
  if (gammas.empty()) throw EmptyGrid("scan: empty candidate set");
  CandidateSet cs;
  cs.boundary.reserve(gammas.size());
  const double* qb = sd.qs.data();
  const double* qe = qb + sd.n;
  for (double g : gammas)
    cs.boundary.push_back(static_cast<int>(std::upper_bound(qb, qe, g) - qb));
  cs.gammas = std::move(gammas);
  return cs;
}

LseScanResult lse_scan(const SortedData& sd, const CandidateSet& cs,
                       const Eigen::VectorXd& y, LseWorkspace& ws,
                       bool compute_coefs) {
  const int n = sd.n, k = sd.k, G = cs.size();
  if (y.size() != n) throw DimensionMismatch("lse_scan: response length != n");

  ws.ys.resize(n);
  for (int t = 0; t < n; ++t) ws.ys(t) = y(sd.order[t]);
  ws.prefix.resize(n + 1);
  ws.suffix.resize(n + 1);

  // Ascending sweep: prefix[m] = SSR of rows [0, m) on the k regressors.
  {
    std::fill(ws.R, ws.R + k * k, 0.0);
    std::fill(ws.z, ws.z + k, 0.0);
    double rho2 = 0.0;
    ws.prefix[0] = 0.0;
    for (int t = 0; t < n; ++t) {
      for (int c = 0; c < k; ++c) ws.row[c] = sd.Xt(c, t);
      givens_insert(ws.R, ws.z, rho2, ws.row, ws.ys(t), k);
      ws.prefix[t + 1] = rho2;
    }
  }
  // Descending sweep: suffix[m] = SSR of rows [m, n).
  {
    std::fill(ws.R, ws.R + k * k, 0.0);
    std::fill(ws.z, ws.z + k, 0.0);
    double rho2 = 0.0;
    ws.suffix[n] = 0.0;
    for (int t = n - 1; t >= 0; --t) {
      for (int c = 0; c < k; ++c) ws.row[c] = sd.Xt(c, t);
      givens_insert(ws.R, ws.z, rho2, ws.row, ws.ys(t), k);
      ws.suffix[t] = rho2;
    }
  }

  LseScanResult res;
  res.profile.resize(G);
  int best = 0;
  double bestv = std::numeric_limits<double>::infinity();
  for (int j = 0; j < G; ++j) {
    const int m = cs.boundary[j];
    const double v = ws.prefix[m] + ws.suffix[m];
    res.profile(j) = v / n;
    if (v < bestv) {
      bestv = v;
      best = j;
    }
  }
  res.winner = best;

  if (compute_coefs) {
    const int m = cs.boundary[best];
    double Rlo[kMaxCols * kMaxCols], zlo[kMaxCols], blo[kMaxCols];
    double Rup[kMaxCols * kMaxCols], zup[kMaxCols], bup[kMaxCols];
    factor_range(sd, ws.ys, 0, m, Rlo, zlo, ws.row);
    factor_range(sd, ws.ys, m, n, Rup, zup, ws.row);
    const bool ok_lo = back_solve(Rlo, zlo, blo, k);
    const bool ok_up = back_solve(Rup, zup, bup, k);
    res.rank_ok = ok_lo && ok_up;
    res.beta.resize(k);
    res.delta.resize(k);
    for (int c = 0; c < k; ++c) {
      res.beta(c) = blo[c];
      res.delta(c) = bup[c] - blo[c];
    }
    // Residuals in original row order; rows [m, n) of the sorted sample are
    // the upper regime.
    res.residuals.resize(n);
    for (int t = 0; t < n; ++t) {
      const double* b = (t < m) ? blo : bup;
      double fit = 0.0;
      for (int c = 0; c < k; ++c) fit += sd.Xt(c, t) * b[c];
      res.residuals(sd.order[t]) = ws.ys(t) - fit;
    }
  }
  return res;
}

LseScanResult lse_fit_at(const SortedData& sd, int boundary,
                         const Eigen::VectorXd& y, LseWorkspace& ws) {
  const int n = sd.n, k = sd.k;
  if (y.size() != n) throw DimensionMismatch("lse_fit_at: response length != n");
  if (boundary < 0 || boundary > n)
    throw DimensionMismatch("lse_fit_at: boundary outside [0, n]");

  ws.ys.resize(n);
  for (int t = 0; t < n; ++t) ws.ys(t) = y(sd.order[t]);

  const int m = boundary;
  double Rlo[kMaxCols * kMaxCols], zlo[kMaxCols], blo[kMaxCols];
  double Rup[kMaxCols * kMaxCols], zup[kMaxCols], bup[kMaxCols];
  factor_range(sd, ws.ys, 0, m, Rlo, zlo, ws.row);
  factor_range(sd, ws.ys, m, n, Rup, zup, ws.row);
  LseScanResult res;
  const bool ok_lo = back_solve(Rlo, zlo, blo, k);
  const bool ok_up = back_solve(Rup, zup, bup, k);
  res.rank_ok = ok_lo && ok_up;
  res.beta.resize(k);
  res.delta.resize(k);
  for (int c = 0; c < k; ++c) {
    res.beta(c) = blo[c];
    res.delta(c) = bup[c] - blo[c];
  }
  res.residuals.resize(n);
  for (int t = 0; t < n; ++t) {
    const double* b = (t < m) ? blo : bup;
    double fit = 0.0;
    for (int c = 0; c < k; ++c) fit += sd.Xt(c, t) * b[c];
    res.residuals(sd.order[t]) = ws.ys(t) - fit;
  }
  return res;
}

HingePlan HingePlan::make(const Dataset& ds, std::vector<double> gammas) {
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
  if (gammas.empty()) throw EmptyGrid("scan: empty candidate set");

  const int n = ds.n(), k = ds.k();
  const int G = static_cast<int>(gammas.size());
  HingePlan hp;
  hp.n = n;
  hp.k = k;
  hp.gammas = std::move(gammas);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ds.X());
  hp.Q1 = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  hp.R1 = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  {
    double maxd = 0.0, mind = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
      maxd = std::max(maxd, std::abs(hp.R1(i, i)));
      mind = std::min(mind, std::abs(hp.R1(i, i)));
    }
    hp.x_full_rank = maxd > 0.0 && mind > kRankTol * maxd;
  }

  const Eigen::VectorXd q = ds.q();
  hp.Hperp.resize(n, G);
  hp.W.resize(k, G);
  hp.hnorm2.resize(G);
  Eigen::VectorXd h(n), w1(k), w2(k);
  for (int j = 0; j < G; ++j) {
    const double g = hp.gammas[j];
    for (int t = 0; t < n; ++t) h(t) = q(t) > g ? q(t) - g : 0.0;
    // Two classical Gram-Schmidt passes give an orthogonality residual at
    // working precision even for hinges nearly inside col(X).
    w1.noalias() = hp.Q1.transpose() * h;
    h.noalias() -= hp.Q1 * w1;
    w2.noalias() = hp.Q1.transpose() * h;
    h.noalias() -= hp.Q1 * w2;
    hp.Hperp.col(j) = h;
    hp.W.col(j) = w1 + w2;
    hp.hnorm2(j) = h.squaredNorm();
  }
  return hp;
}

ClseScanResult clse_scan(const HingePlan& hp, const Eigen::VectorXd& y,
                         ClseWorkspace& ws, bool compute_coefs) {
  const int n = hp.n, k = hp.k;
  const int G = static_cast<int>(hp.gammas.size());
  if (y.size() != n) throw DimensionMismatch("clse_scan: response length != n");

  ws.u.noalias() = hp.Q1.transpose() * y;
  ws.ry = y;
  ws.ry.noalias() -= hp.Q1 * ws.u;
  const double ssr_x = ws.ry.squaredNorm();
  ws.t.noalias() = hp.Hperp.transpose() * ws.ry;

  ClseScanResult res;
  res.profile.resize(G);
  int best = 0;
  double bestv = std::numeric_limits<double>::infinity();
  for (int j = 0; j < G; ++j) {
    const double s = hp.hnorm2(j);
    double v = ssr_x;
    if (s > 0.0) v -= ws.t(j) * ws.t(j) / s;
    if (v < 0.0) v = 0.0;
    res.profile(j) = v / n;
    if (v < bestv) {
      bestv = v;
      best = j;
    }
  }
  res.winner = best;

  if (compute_coefs) {
    const double s = hp.hnorm2(best);
    res.rank_ok = hp.x_full_rank && s > 0.0;
    res.delta3 = s > 0.0 ? ws.t(best) / s : 0.0;
    Eigen::VectorXd rhs = ws.u - hp.W.col(best) * res.delta3;
    res.beta = hp.R1.triangularView<Eigen::Upper>().solve(rhs);
    res.residuals = ws.ry - res.delta3 * hp.Hperp.col(best);
  }
  return res;
}

}  // namespace threshreg::detail
