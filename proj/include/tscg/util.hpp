#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace tscg {

/// Worker count: TSCG_THREADS if set (>=1), else hardware concurrency.
inline int thread_count_from_env() {
  if (const char* s = std::getenv("TSCG_THREADS")) {
    const int n = std::atoi(s);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n). Each index must write only its own outputs;
/// results are then independent of the worker count.
inline void parallel_for(std::ptrdiff_t n, int threads,
                         const std::function<void(std::ptrdiff_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(std::min<std::ptrdiff_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::ptrdiff_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace tscg
