#pragma once

#include <cstddef>
#include <functional>

namespace fogdrip {

/// Worker count: hardware concurrency, capped by the FOGDRIP_THREADS variable.
unsigned worker_threads();

/// Calls fn(i) for i in [0, n) on up to worker_threads() threads. Work is
/// handed out in index order; callers write results by index, so the outcome
/// does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fogdrip
