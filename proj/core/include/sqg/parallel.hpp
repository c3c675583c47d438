#pragma once

#include <cstddef>
#include <functional>

namespace sqg {

/// Number of worker threads to use when a caller passes 0.
unsigned default_parallelism();

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = default).
/// Each index is visited exactly once; results are deterministic as long as fn
/// writes only to slot i. The first exception thrown by any fn is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace sqg
