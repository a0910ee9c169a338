#pragma once

#include <cstddef>
#include <functional>

namespace conehol {

/// Worker count: CONEHOL_THREADS if set and positive, else the hardware count.
unsigned thread_count();

/// Run body(i) for i in [0, n) on up to thread_count() threads. Each index is
/// visited exactly once; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace conehol
