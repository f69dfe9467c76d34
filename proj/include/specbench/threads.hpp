#pragma once

#include <cstdint>
#include <functional>

namespace specbench {

// Worker cap for pixel/band-parallel loops. 0 means "use hardware concurrency".
// Reads SPECBENCH_THREADS on first use unless set explicitly.
void set_thread_count(int n);
int thread_count();

// Runs fn(begin, end) over a static partition of [0, n). Chunks never overlap,
// so per-index writes need no synchronization. Partitioning is by index range
// only; outputs must not depend on the worker count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace specbench
