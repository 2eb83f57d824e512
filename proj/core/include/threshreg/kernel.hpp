// kernel.hpp
//
// Second-order kernels for the local moment estimates around the threshold
// and the rule-of-thumb bandwidth.

#pragma once

#include <optional>

#include "threshreg/dataset.hpp"

namespace threshreg {

enum class KernelKind { epanechnikov, gaussian };

struct KernelSpec {
  KernelKind kind = KernelKind::epanechnikov;
  std::optional<double> bandwidth;  // default: rule-of-thumb from the data
};

// Kernel weight K(u).  Epanechnikov: 0.75*(1-u^2) on |u|<=1; Gaussian:
// standard normal density.
double kernel_value(KernelKind kind, double u);

// Second moment kappa2 = int u^2 K(u) du (1/5 and 1 respectively).
double kernel_kappa2(KernelKind kind);

// Rule-of-thumb bandwidth 2.34 * sd(q) * n^(-1/5).  Throws TooFewRows for
// n < 10 and DegenerateFit when q has zero variance.
double default_bandwidth(const Dataset& ds);

// The bandwidth a KernelSpec resolves to on this dataset.
double resolve_bandwidth(const Dataset& ds, const KernelSpec& spec);

}  // namespace threshreg
