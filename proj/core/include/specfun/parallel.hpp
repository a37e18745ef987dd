#pragma once

#include <cstddef>
#include <functional>

namespace specfun {

// Worker count from SPECFUN_THREADS, falling back to the hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, count) on contiguous blocks.  Each index is
// handled exactly once, so results written by index are independent of the
// thread count.  The exception from the lowest failing index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace specfun
