#pragma once

#include <cstddef>
#include <functional>

namespace imgsim {

// Worker count from IMGSIM_THREADS (0 or unset = hardware concurrency).
[[nodiscard]] unsigned thread_count();

// Calls fn(i) for i in [0, n). Each index is visited exactly once; callers
// write results to per-index slots so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

} // namespace imgsim
