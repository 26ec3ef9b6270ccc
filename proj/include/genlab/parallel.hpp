#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace genlab {

/// Global cap on worker threads (set once by the CLI --threads flag).
int max_threads();
void set_max_threads(int n);

/**
 * Runs fn(i) for i in [0, n) on up to max_threads() workers.
 *
 * Contract: fn(i) writes only to slot i of some preallocated output; any
 * reduction happens after the join, in index order. Results are therefore
 * identical for every thread count.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace genlab
