#pragma once

#include <cstddef>
#include <functional>

namespace softwall {

/// Worker count used by internal sweeps. 0 means std::thread::hardware_concurrency().
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; callers write
/// results into slot i so output order never depends on scheduling. The first
/// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace softwall
