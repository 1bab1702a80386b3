#ifndef FRACGRAD_PARALLEL_HPP
#define FRACGRAD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace fracgrad {

/// Worker count: FRACGRAD_THREADS if set, else hardware concurrency.
int thread_count();

/// Runs f(i) for i in [0, n) on the worker pool.  Each index writes only its
/// own slots, so results are deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &f);

} // namespace fracgrad

#endif
