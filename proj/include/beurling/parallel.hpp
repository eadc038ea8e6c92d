#pragma once

#include <cstddef>
#include <functional>

namespace beurling {

// Worker count for grid scans: the BEURLING_LAB_THREADS environment variable
// when set to a positive value, hardware concurrency otherwise (0 means
// auto). Results are always written by index, so reports are byte-identical
// for any worker count.

std::size_t worker_count();

/// Runs fn(i) for i in [0, n), possibly on several threads. The first
/// exception thrown by any worker is rethrown on the caller after all
/// workers finished.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace beurling
