#pragma once

#include <cstddef>
#include <functional>

namespace clusterlens {

/// Worker count honoring the CLUSTERLENS_THREADS cap.
/// Unset: hardware concurrency. 0 or 1: sequential.
std::size_t thread_cap();

/// Runs fn(i) for i in [0, count). Iterations must be independent; callers
/// write results into preassigned slots so the reduction is order-free.
/// Serial when thread_cap() <= 1. Exceptions from workers are rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace clusterlens
