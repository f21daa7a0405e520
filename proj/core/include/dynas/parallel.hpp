#pragma once

#include <cstddef>
#include <functional>

namespace dynas {

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Indices are
/// claimed in increasing order. The first exception thrown by a body is
/// rethrown after all workers have stopped.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace dynas
