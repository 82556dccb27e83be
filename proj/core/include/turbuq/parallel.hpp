#pragma once

#include <cstddef>
#include <functional>

namespace turbuq {

/// Process-wide default worker count. 0 means "use hardware concurrency".
/// The CLI sets this from --threads / TURBUQ_THREADS; library callers may
/// also pass explicit counts to parallel_for.
void set_default_threads(int n);
int default_threads();

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Each index is processed exactly once and results must be written to
/// index-owned slots, so the outcome is independent of the worker count.
/// Exceptions thrown by fn are rethrown on the calling thread.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    parallel_for(n, 0, fn);
}

} // namespace turbuq
