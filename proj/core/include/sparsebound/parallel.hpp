#pragma once

#include <cstddef>
#include <functional>

namespace sparsebound {

/// Worker threads used by parallel loops: the value set by
/// set_worker_threads() if any, else SPARSEBOUND_THREADS, else the hardware
/// concurrency. Always at least 1.
std::size_t worker_threads();

/// Overrides the worker count for the whole process; 0 restores the default.
void set_worker_threads(std::size_t n);

/// Runs body(i) for i in [0, count). Iterations may run concurrently and in any
/// order, so body must only write state owned by index i. Calls nested inside
/// another parallel_for run serially on the calling thread. The first exception
/// thrown by any iteration is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sparsebound
