#pragma once

#include <cstddef>
#include <functional>

namespace nmrsp {

/// 0 means std::thread::hardware_concurrency() (at least 1).
unsigned resolve_threads(unsigned requested) noexcept;

/// Calls body(i) for every i in [0, n) on up to `threads` workers. Each index
/// is visited exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception thrown by any
/// worker is rethrown after all workers have joined.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace nmrsp
