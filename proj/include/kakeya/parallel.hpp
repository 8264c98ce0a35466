#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace kakeya {

/// Worker count from KAKEYA_THREADS, else the hardware concurrency (>= 1).
unsigned default_thread_count();

/// Runs fn(i) for i in [0, count) on `threads` workers (0 = default).
/// Work items must write to disjoint outputs; the first exception thrown by
/// any item is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Pairwise tree sum in index order. The result depends only on the values,
/// never on how they were produced.
double ordered_sum(std::span<const double> values);

}  // namespace kakeya
