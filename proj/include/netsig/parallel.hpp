#pragma once

#include <cstddef>
#include <functional>

namespace netsig {

/// Worker count used by parallel_for; 0 means hardware concurrency.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Runs body(i) for i in [0, count). Iterations must be independent; the
/// first exception thrown by any iteration is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace netsig
