#pragma once

#include <cstddef>
#include <functional>

namespace mpqkd {

// Worker count: MPQKD_THREADS if set (>= 1), otherwise the hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n) on up to `workers` threads. Work items are claimed
// dynamically; callers store results by index so output order is deterministic.
// The first exception thrown by any item is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned workers = 0);

}  // namespace mpqkd
