#pragma once

#include <cstddef>
#include <functional>

namespace fdx {

// Worker cap: hardware concurrency, reduced by the FDX_THREADS environment
// variable when set. Re-read on every call.
std::size_t worker_count();

// Runs body(0..count-1) across workers. body(i) must only write to state owned
// by index i; under that contract results are identical for any worker count.
// Nested calls run serially on the calling worker.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fdx
