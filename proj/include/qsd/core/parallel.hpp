#pragma once

#include <cstddef>
#include <functional>

namespace qsd {

/// Runs body(i) for i in [0, n) on up to `workers` threads. Items are claimed
/// dynamically; callers write results into slot i so that the merge order is
/// the index order regardless of scheduling. The first exception thrown by a
/// body is rethrown on the calling thread after all workers stop.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& body);

/// Clamps a requested worker count to [1, hardware concurrency * 4].
unsigned effective_workers(unsigned requested) noexcept;

}  // namespace qsd
