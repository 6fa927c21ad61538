#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace tensor_spectra {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, n).  Each index writes only its own slot, so the
// result is identical for every worker count.
inline void parallel_for_index(long long n, int workers,
                               const std::function<void(long long)>& fn) {
  workers = std::min<long long>(resolve_workers(workers), std::max(1LL, n));
  if (workers <= 1) {
    for (long long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  const long long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long long begin = w * chunk;
    const long long end = std::min(n, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        for (long long i = begin; i < end; ++i) fn(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& failure : failures)
    if (failure) std::rethrow_exception(failure);
}

}  // namespace tensor_spectra
