#pragma once

#include <cstddef>
#include <functional>

namespace saddle {

// Number of worker threads for a request: values <= 0 mean all hardware threads.
int resolve_threads(int requested);

// Calls fn(i) for i in [0, n) on up to `threads` workers. Items are handed out in
// index order; the first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace saddle
