#pragma once

#include <cstddef>
#include <functional>

namespace mlnhardy {

// Worker-count cap used by row-parallel loops. 0 = resolve from the
// MLNHARDY_THREADS environment variable, falling back to hardware concurrency.
int default_threads();
void set_default_threads(int t);
int resolve_threads(int requested);

// Static contiguous partition of [0,n) over `threads` workers. Every index is
// processed exactly once and each chunk runs in a fixed order within its
// worker, so results do not depend on the worker count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t begin, std::size_t end)>& chunk);

}  // namespace mlnhardy
