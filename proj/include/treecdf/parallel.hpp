#pragma once

#include <cstddef>
#include <functional>

namespace treecdf {

// Worker count for data-parallel loops. Controlled by the TREECDF_THREADS
// environment variable; defaults to the hardware concurrency.
int worker_count();

// Invokes fn(begin, end) on disjoint chunks covering [0, n). Chunking depends
// only on n and the worker count, so per-chunk partial results combined in
// chunk order give reproducible reductions.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace treecdf
