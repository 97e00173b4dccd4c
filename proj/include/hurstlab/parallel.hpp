#pragma once

#include <cstddef>
#include <functional>

namespace hurstlab {

/// Worker count: HURSTLAB_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index runs exactly once on some worker;
/// callers write results into slot i so the output never depends on the
/// schedule. The first exception thrown by any body is rethrown after all
/// workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hurstlab
