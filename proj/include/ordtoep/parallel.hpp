#pragma once

#include <cstddef>
#include <functional>

namespace ordtoep {

/// Upper bound on worker threads used by data-parallel stages. 0 means
/// hardware concurrency.
void set_thread_cap(unsigned threads);
unsigned thread_cap();

/// Calls body(begin, end) on disjoint contiguous chunks of [0, n). Each index
/// is visited exactly once; the first exception thrown by any chunk is
/// rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 4096);

}  // namespace ordtoep
