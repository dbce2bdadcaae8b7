#pragma once

#include <cstddef>
#include <functional>

namespace uniband {

//! Worker count: `requested` if > 0, else UNIBAND_THREADS, else hardware.
int resolve_threads(int requested);

//! Runs fn(i) for i in [0, count) on up to `threads` workers.
//!
//! Work is split into contiguous index chunks. Results must be written by
//! index so that the schedule cannot affect output. The first exception, if
//! any, is rethrown on the calling thread.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

} // namespace uniband
