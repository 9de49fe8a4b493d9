#pragma once

#include <cstddef>
#include <functional>

namespace rqmc {

/// Number of worker threads to use: explicit request if > 0, otherwise the
/// RQMC_THREADS environment variable, otherwise the hardware concurrency.
int resolve_threads(int requested = 0);

/// Runs fn(i) for i in [0, n) on up to `threads` workers with a static
/// block partition. Results must be written to distinct slots so that the
/// outcome is independent of the thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace rqmc
