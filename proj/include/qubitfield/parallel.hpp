#pragma once

#include <cstddef>
#include <functional>

namespace qubitfield {

/// Caps the number of worker threads used by site loops; 0 restores the
/// hardware default.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Calls body(i) for i in [0, n). Iterations may run concurrently and must
/// only write to their own output slot. Exceptions are rethrown on the
/// calling thread (the first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace qubitfield
