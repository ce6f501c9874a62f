#pragma once

#include <cstddef>
#include <functional>

namespace besovlab {

/// Worker count: BESOVLAB_THREADS if set (>= 1), else hardware concurrency.
std::size_t thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() threads. Each index is
/// visited exactly once; callers write results to per-index slots so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace besovlab
