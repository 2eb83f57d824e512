#include "threshreg/kernel.hpp"

#include <cmath>

namespace threshreg {

double kernel_value(KernelKind kind, double u) {
  switch (kind) {
    case KernelKind::epanechnikov:
      return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    case KernelKind::gaussian:
      return 0.3989422804014327 * std::exp(-0.5 * u * u);
  }
  return 0.0;
}

double kernel_kappa2(KernelKind kind) {
  return kind == KernelKind::epanechnikov ? 0.2 : 1.0;
}

double default_bandwidth(const Dataset& ds) {
  const int n = ds.n();
  if (n < 10) throw TooFewRows("default_bandwidth: need n >= 10");
  const Eigen::VectorXd q = ds.q();
  const double mean = q.mean();
  const double var = (q.array() - mean).square().sum() / (n - 1);
  if (!(var > 0.0))
    throw DegenerateFit("default_bandwidth: threshold variable has zero variance");
  return 2.34 * std::sqrt(var) * std::pow(static_cast<double>(n), -0.2);
}

double resolve_bandwidth(const Dataset& ds, const KernelSpec& spec) {
  if (spec.bandwidth) {
    if (!(*spec.bandwidth > 0.0))
      throw DomainError("kernel: bandwidth must be positive");
    return *spec.bandwidth;
  }
  return default_bandwidth(ds);
}

}  // namespace threshreg
