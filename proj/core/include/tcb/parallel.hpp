#pragma once

#include <cstddef>
#include <functional>

namespace tcb {

/// Parallelism cap: TCB_THREADS when set (minimum 1), otherwise the
/// hardware concurrency.
std::size_t max_threads();

/// Runs fn(i) for i in [0, count) across at most `threads` workers.
/// Each index owns its output slot, so results are schedule-independent.
/// threads == 0 means max_threads().
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  std::size_t threads = 0);

}  // namespace tcb
