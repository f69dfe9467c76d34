#include "specbench/threads.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace specbench {

namespace {

std::atomic<int> g_threads{-1};

int resolve_default() {
  if (const char* env = std::getenv("SPECBENCH_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

}  // namespace

void set_thread_count(int n) { g_threads.store(n > 0 ? n : static_cast<int>(std::thread::hardware_concurrency())); }

int thread_count() {
  int v = g_threads.load();
  if (v <= 0) {
    v = resolve_default();
    g_threads.store(v);
  }
  return v;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  int workers = std::min<std::int64_t>(thread_count(), n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::int64_t begin = w * chunk;
    std::int64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace specbench
