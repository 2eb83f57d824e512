// grid.hpp
//
// Candidate-threshold grids.  The default rule discards a fraction of the
// sample at each tail of the empirical distribution of q and lays
// equidistant points across what is left; candidates that would leave
// fewer than k+1 observations in either regime are dropped so every
// candidate admits an identifiable two-regime fit.

#pragma once

#include <optional>
#include <vector>

#include "threshreg/dataset.hpp"

namespace threshreg {

struct GridSpec {
  double trim_fraction = 0.05;          // per tail, in [0, 0.5)
  std::optional<int> n_points;          // default: floor(n/2), must be >= 3
  std::vector<double> explicit_points;  // when non-empty, overrides the rule
};

// Sorted, deduplicated candidate thresholds.  Throws EmptyGrid when no
// candidate survives the regime-count filter, TooFewRows when the sample
// cannot support a two-regime fit at all (n < 4k+4 or fewer than 2k+2
// distinct threshold values), DomainError on an invalid GridSpec.
std::vector<double> threshold_grid(const Dataset& ds, const GridSpec& spec = {});

}  // namespace threshreg
