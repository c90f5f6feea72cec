#pragma once

#include <cstddef>
#include <functional>

namespace sdftest {

/// Number of worker threads used when a caller passes threads <= 0.
int default_thread_count() noexcept;

/// Calls body(i) for i in [0, count) on up to `threads` workers
/// (threads <= 0 selects default_thread_count()). Work is handed out by an
/// atomic counter; callers write results by index, so output never depends
/// on scheduling. The exception from the lowest failing index is rethrown
/// after all workers finish.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace sdftest
