#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace wavedof {

/// Worker count: WAVEDOF_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
int thread_count();

/// Runs fn(block) for block in [0, blocks) across worker threads. Each block
/// index is visited exactly once; callers write results into per-block slots
/// so the outcome does not depend on the thread count.
void parallel_blocks(std::size_t blocks, const std::function<void(std::size_t)>& fn);

}  // namespace wavedof
