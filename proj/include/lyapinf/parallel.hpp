#pragma once

#include <cstddef>
#include <functional>

namespace lyapinf {

/// Worker count: LYAPINF_THREADS if set (clamped to >= 1), otherwise the
/// machine parallelism.
std::size_t thread_count();

/// Runs task(i) for i in [0, count) across worker threads. Tasks must be
/// independent; any shared output must be indexed by i so the result does not
/// depend on scheduling. Exceptions from tasks are rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace lyapinf
