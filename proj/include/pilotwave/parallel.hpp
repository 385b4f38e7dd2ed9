#pragma once

#include <cstddef>
#include <functional>

namespace pilotwave {

/// Effective worker count: `requested` if positive, else the PILOTWAVE_JOBS
/// environment variable, else hardware concurrency.
int resolve_jobs(int requested);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index is
/// processed exactly once; callers make fn(i) write only to slot i so the
/// schedule can never change results. The first exception thrown by any
/// worker is rethrown on the calling thread.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace pilotwave
