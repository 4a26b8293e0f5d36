#pragma once

#include <cstddef>
#include <functional>

namespace swt {

/// Worker cap for replicate-level parallelism (0 = hardware concurrency).
void set_worker_threads(int n);
int worker_threads();

/// Runs fn(i) for i in [0, count) across up to worker_threads() threads.
/// Each index is processed exactly once; callers write results into
/// per-index slots, so the outcome does not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace swt
