#pragma once

#include <functional>

namespace sixdma {

// Process-wide worker count for parallel_for; 0 picks hardware concurrency.
void set_parallel_threads(int threads);
int parallel_threads();

// Runs fn(0..n-1) across the worker threads. Each index writes only its own
// slots, so results are independent of scheduling; nested calls degrade to
// inline execution.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace sixdma
