#pragma once

#include <cstddef>
#include <functional>

namespace bellnl {

/// Worker cap: set_thread_count() if called with n > 0, else BELLNL_THREADS,
/// else the hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs fn(chunk) for chunk in [0, chunks) on up to thread_count() workers.
/// Exceptions from workers are rethrown on the caller after all finish.
void parallel_for(std::size_t chunks, const std::function<void(std::size_t)>& fn);

} // namespace bellnl
