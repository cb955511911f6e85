#pragma once

#include <cstdint>
#include <functional>

namespace conebook {

// Worker cap: CONEBOOK_THREADS if set, else the hardware count.
int worker_count();

// Runs fn(i) for i in [0, n) across workers. Each index is processed by a
// pure function of i (callers seed per-index RNG streams), and results must
// be written to preallocated per-index slots, so the outcome is independent
// of the worker count and scheduling.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace conebook
