#pragma once

#include <functional>

namespace txnembed {

/// Runs fn over [0, n) split into contiguous chunks across `threads` workers.
/// Callers must only write to per-index slots so the result is independent of
/// the thread count. threads <= 1 runs inline.
void parallel_for(long n, int threads, const std::function<void(long, long)>& fn);

}  // namespace txnembed
