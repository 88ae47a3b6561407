#pragma once

#include <cstddef>
#include <functional>

namespace levygen {

/// Runs fn(i) for every i in [0, n) on up to `workers` threads. Results must be
/// written to per-index slots; the exception of the smallest failing index is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// Worker count used when a caller passes 0.
int default_workers();

}  // namespace levygen
