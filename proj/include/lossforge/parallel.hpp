#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace lossforge {

// Worker count: LOSSFORGE_THREADS if set (>=1), hardware concurrency
// otherwise.
inline unsigned worker_count() {
  if (const char* env = std::getenv("LOSSFORGE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs body(i) for i in [0, n) across the worker pool with a static block
// split.  Each index is processed exactly once; since all library code
// derives per-index RNG seeds, the result is identical whatever the worker
// count.  Exceptions from workers are rethrown on the caller thread.
inline void parallel_for(long n, const std::function<void(long)>& body) {
  if (n <= 0) return;
  const unsigned workers =
      std::min<unsigned>(worker_count(), static_cast<unsigned>(n));
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const long chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w]() {
      const long lo = static_cast<long>(w) * chunk;
      const long hi = std::min(n, lo + chunk);
      try {
        for (long i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace lossforge
