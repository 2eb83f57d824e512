#include "threshreg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "threshreg/util.hpp"

namespace threshreg {

namespace {

// Candidates must leave at least k+1 observations in each regime
// (lower: q <= gamma, upper: q > gamma) to keep per-regime fits identified.
std::vector<double> regime_filter(const std::vector<double>& sorted_q,
                                  std::vector<double> candidates, int k) {
  const auto n = static_cast<long>(sorted_q.size());
  std::vector<double> keep;
  keep.reserve(candidates.size());
  for (double g : candidates) {
    const long m = std::upper_bound(sorted_q.begin(), sorted_q.end(), g) - sorted_q.begin();
    if (m >= k + 1 && n - m >= k + 1) keep.push_back(g);
  }
  return keep;
}

}  // namespace

std::vector<double> threshold_grid(const Dataset& ds, const GridSpec& spec) {
  const int n = ds.n(), k = ds.k();
  if (spec.trim_fraction < 0.0 || spec.trim_fraction >= 0.5)
    throw DomainError("threshold_grid: trim_fraction outside [0, 0.5)");
  if (spec.n_points && *spec.n_points < 3)
    throw DomainError("threshold_grid: n_points must be >= 3");
  if (n < 4 * k + 4)
    throw TooFewRows("threshold_grid: need n >= 4k+4 observations");

  std::vector<double> sq(ds.X().col(k - 1).data(), ds.X().col(k - 1).data() + n);
  std::sort(sq.begin(), sq.end());
  {
    long distinct = 1;
    for (int t = 1; t < n; ++t)
      if (sq[t] != sq[t - 1]) ++distinct;
    // A constant threshold variable falls through: no candidate can split
    // it into two regimes, which the filter below reports as EmptyGrid.
    if (distinct > 1 && distinct < 2 * k + 2)
      throw TooFewRows("threshold_grid: need at least 2k+2 distinct threshold values");
  }

  std::vector<double> cand;
  if (!spec.explicit_points.empty()) {
    cand = spec.explicit_points;
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  } else {
    const double lo = empirical_quantile(sq, spec.trim_fraction);
    const double hi = empirical_quantile(sq, 1.0 - spec.trim_fraction);
    const int P = spec.n_points ? *spec.n_points : std::max(3, n / 2);
    cand.reserve(P);
    for (int j = 0; j < P; ++j)
      cand.push_back(lo + (hi - lo) * static_cast<double>(j) / (P - 1));
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  }

  cand = regime_filter(sq, std::move(cand), k);
  if (cand.empty())
    throw EmptyGrid("threshold_grid: no candidate leaves k+1 observations per regime");
  return cand;
}

}  // namespace threshreg
