#pragma once

#include <cstddef>
#include <functional>

namespace mmdim {

/// Worker count used by all parallel loops; 0 or 1 means serial.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
/// write results into per-index slots so the merge order never depends on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mmdim
