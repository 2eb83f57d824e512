#include "threshreg/util.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "threshreg/errors.hpp"

namespace threshreg {

double empirical_quantile(std::span<const double> values, double p) {
  if (values.empty()) throw DomainError("empirical_quantile: empty sample");
  if (p < 0.0 || p > 1.0) throw DomainError("empirical_quantile: p outside [0,1]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = p * (static_cast<double>(v.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  const double w = h - static_cast<double>(lo);
  return (1.0 - w) * v[lo] + w * v[lo + 1];
}

double order_statistic_quantile(std::span<const double> draws, double s) {
  if (draws.empty()) throw DomainError("order_statistic_quantile: no draws");
  if (s <= 0.0 || s >= 1.0) throw DomainError("order_statistic_quantile: s outside (0,1)");
  std::vector<double> v(draws.begin(), draws.end());
  std::sort(v.begin(), v.end());
  const double B = static_cast<double>(v.size());
  // ceil(s*B) with a guard against cases like s*B = 0.95*399 landing a hair
  // above its exact integer value.
  auto idx = static_cast<long>(std::ceil(s * B - 1e-9));
  idx = std::clamp(idx, 1L, static_cast<long>(v.size()));
  return v[static_cast<std::size_t>(idx - 1)];
}

double iqr(std::span<const double> values) {
  return empirical_quantile(values, 0.75) - empirical_quantile(values, 0.25);
}

double PiecewiseLinear::eval(double at) const {
  if (x.empty()) throw DomainError("PiecewiseLinear: empty curve");
  if (at <= x.front()) return y.front();
  if (at >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const auto j = static_cast<std::size_t>(it - x.begin());  // x[j-1] < at < x[j]
  const double w = (at - x[j - 1]) / (x[j] - x[j - 1]);
  return (1.0 - w) * y[j - 1] + w * y[j];
}

std::vector<GammaInterval> sublevel_intervals(const PiecewiseLinear& curve,
                                              const PiecewiseLinear& bound) {
  if (curve.x.empty()) throw DomainError("sublevel_intervals: empty curve");
  const double lo = curve.x.front(), hi = curve.x.back();
  if (curve.x.size() == 1) {
    // Degenerate one-point domain.
    if (curve.y.front() <= bound.eval(lo)) return {GammaInterval{lo, hi, true, true}};
    return {};
  }

  // Merge breakpoints of both curves inside the domain; d is linear between
  // consecutive merged breakpoints.
  std::vector<double> xs = curve.x;
  for (double b : bound.x)
    if (b > lo && b < hi) xs.push_back(b);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> d(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j)
    d[j] = curve.eval(xs[j]) - bound.eval(xs[j]);

  std::vector<GammaInterval> out;
  bool open = false;
  GammaInterval cur;
  auto close_at = [&](double x) {
    cur.hi = x;
    cur.unbounded_hi = (x >= hi);
    out.push_back(cur);
    open = false;
  };
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const bool inside = d[j] <= 0.0;
    if (inside && !open) {
      double start = xs[j];
      if (j > 0 && d[j - 1] > 0.0) {
        // crossing in (xs[j-1], xs[j])
        const double w = d[j - 1] / (d[j - 1] - d[j]);
        start = xs[j - 1] + w * (xs[j] - xs[j - 1]);
      }
      cur = GammaInterval{start, start, start <= lo, false};
      open = true;
    } else if (!inside && open) {
      // crossing in (xs[j-1], xs[j]); d[j-1] <= 0 < d[j]
      const double w = d[j - 1] / (d[j - 1] - d[j]);
      close_at(xs[j - 1] + w * (xs[j] - xs[j - 1]));
    }
  }
  if (open) close_at(hi);
  return out;
}

}  // namespace threshreg
