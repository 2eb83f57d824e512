// detail/scan.hpp
//
// Fast profile scans over a fixed candidate set.  Internal machinery: the
// public estimators and the bootstrap engines share these so a resample
// only pays O(n k^2) per fit instead of a dense solve per candidate.
//
// Unconstrained scan: with rows sorted by q, the interacted design at any
// candidate decouples into two independent per-regime regressions, so one
// ascending Givens-rotation sweep yields every lower-regime SSR and one
// descending sweep every upper-regime SSR; the profile is their sum read
// off at each candidate's boundary index.
//
// Constrained scan: the design is [X, h(gamma)] with hinge column
// h_t = (q_t - gamma)^+.  X is factored once; each candidate's hinge is
// orthogonalised against it up front (twice, classical Gram-Schmidt), so a
// new response costs one projection plus a dot product per candidate.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "threshreg/dataset.hpp"

namespace threshreg::detail {

// Maximum number of regressor columns the stack-buffered Givens kernel
// supports; plenty for this model class.
inline constexpr int kMaxCols = 16;

// Dataset rearranged by ascending q.  Shared by every scan on the dataset.
struct SortedData {
  int n = 0, k = 0;
  std::vector<int> order;   // sorted position -> original row
  Eigen::MatrixXd Xt;       // k x n, column t = regressor row of sorted obs t
  Eigen::VectorXd qs;       // ascending
  static SortedData make(const Dataset& ds);
};

// Candidate thresholds plus their boundary indices in the sorted sample:
// boundary[j] = #{q <= gamma_j} (the lower regime is q <= gamma).
struct CandidateSet {
  std::vector<double> gammas;  // ascending, unique
  std::vector<int> boundary;
  static CandidateSet make(const SortedData& sd, std::vector<double> gammas);
  int size() const { return static_cast<int>(gammas.size()); }
};

struct LseScanResult {
  Eigen::VectorXd profile;    // mean squared residual per candidate
  int winner = -1;            // first index attaining the minimum
  Eigen::VectorXd beta;       // lower-regime coefficients at the winner
  Eigen::VectorXd delta;      // upper minus lower
  Eigen::VectorXd residuals;  // original row order
  bool rank_ok = true;
};

// Scratch space reused across scans (bootstrap loops call this millions of
// times; no allocation happens inside when reused).
struct LseWorkspace {
  Eigen::VectorXd ys;              // response in sorted order
  std::vector<double> prefix;      // n+1 lower-regime residual sums of squares
  std::vector<double> suffix;      // n+1 upper-regime residual sums of squares
  double R[kMaxCols * kMaxCols];   // packed triangular factor
  double z[kMaxCols];
  double row[kMaxCols + 1];
};

// Profile scan of the unconstrained model.  y is in original row order.
// compute_coefs=false skips the winner back-solve and residual pass (enough
// when only the profile minimum is needed).
LseScanResult lse_scan(const SortedData& sd, const CandidateSet& cs,
                       const Eigen::VectorXd& y, LseWorkspace& ws,
                       bool compute_coefs = true);

// Two-regime fit at a fixed boundary index m = #{q <= gamma} (no profiling).
// profile is left empty and winner = -1; coefficient/residual fields are
// filled.  Used to build bootstrap data-generating processes at a fixed
// candidate.
LseScanResult lse_fit_at(const SortedData& sd, int boundary,
                         const Eigen::VectorXd& y, LseWorkspace& ws);

// Per-dataset/per-grid factorisation for the constrained scan.  Everything
// is kept in original row order (no permutation of the response needed).
struct HingePlan {
  int n = 0, k = 0;
  std::vector<double> gammas;
  Eigen::MatrixXd Q1;      // n x k orthonormal basis of col(X)
  Eigen::MatrixXd R1;      // k x k upper triangular, X = Q1 R1
  Eigen::MatrixXd Hperp;   // n x G hinge columns orthogonalised against Q1
  Eigen::MatrixXd W;       // k x G, W.col(j) = Q1' h_j (raw hinge loadings)
  Eigen::VectorXd hnorm2;  // squared norms of Hperp columns
  bool x_full_rank = true;
  static HingePlan make(const Dataset& ds, std::vector<double> gammas);
};

struct ClseScanResult {
  Eigen::VectorXd profile;    // mean squared residual per candidate
  int winner = -1;
  Eigen::VectorXd beta;       // at the winner
  double delta3 = 0.0;
  Eigen::VectorXd residuals;  // original row order
  bool rank_ok = true;
};

struct ClseWorkspace {
  Eigen::VectorXd u;      // Q1'y
  Eigen::VectorXd ry;     // y - Q1 u
  Eigen::VectorXd t;      // Hperp' ry
};

ClseScanResult clse_scan(const HingePlan& hp, const Eigen::VectorXd& y,
                         ClseWorkspace& ws, bool compute_coefs = true);

}  // namespace threshreg::detail
