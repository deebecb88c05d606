#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace forge {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Callers store
/// per-index results and reduce in index order afterwards, which keeps
/// reductions bitwise reproducible at any thread count.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace forge
