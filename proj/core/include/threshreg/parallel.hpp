// parallel.hpp
//
// Deterministic fan-out: items are indexed 0..count-1 and every item writes
// only to its own slot, so results are identical for any worker count.

#pragma once

#include <exception>
#include <functional>

namespace threshreg {

// Runs fn(i) for i in [0, count).  threads <= 1 runs inline.  The first
// exception thrown by a worker is rethrown on the calling thread.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace threshreg
