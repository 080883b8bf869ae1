#pragma once

#include <cstddef>
#include <functional>

namespace lightray {

// Worker count used by parallel_for. Defaults to LIGHTRAY_THREADS when set,
// otherwise to the number of logical cores.
int thread_count();
void set_thread_count(int threads);

// Runs body(i) for i in [0, count) over contiguous chunks. Each index must be
// independent; results written by index are therefore identical for any
// thread count. Calls made from inside a worker run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lightray
