#pragma once

#include <cstddef>
#include <functional>

namespace graspkit {

/// Worker count: GRASPKIT_THREADS if set and positive, otherwise hardware
/// concurrency (0 in the variable means auto).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous chunks; the
/// body must write only to slots owned by its index. Exceptions from any
/// worker are rethrown (first by index) after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace graspkit
