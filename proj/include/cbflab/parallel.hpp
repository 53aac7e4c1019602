#pragma once

#include <cstddef>
#include <functional>

namespace cbflab {

/// Worker count: CBF_LAB_THREADS when set (clamped to >= 1), otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Index-parallel loop with deterministic output: the body writes to
/// per-index slots, so the schedule never affects results. Exceptions from
/// workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cbflab
