#pragma once

#include <cstddef>
#include <functional>

namespace modecenter {

/// Worker count: hardware concurrency, capped by MODECENTER_THREADS when set.
unsigned default_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Indices are handed out dynamically; results must be written by index so
/// output does not depend on scheduling. The first exception thrown by any
/// body is rethrown after all workers have stopped.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace modecenter
