#pragma once

#include <cstddef>
#include <functional>

namespace root13 {

// Process-wide worker cap, set once by the CLI's --threads flag.
// 0 (the default) means hardware concurrency. Every parallel loop in the
// library writes into per-index slots, so the cap never changes results.
void set_worker_threads(unsigned n);
unsigned worker_threads();

// Runs fn(0..n-1) on up to worker_threads() threads. If an iteration throws,
// the exception with the lowest index is rethrown after all workers join,
// matching what a sequential loop would have surfaced first.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace root13
