#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace idt {

// Applies f to every index in [0, n) across hardware threads and returns the
// results ordered by index. Work items must be independent; determinism is
// preserved because slot i always holds f(i) no matter which thread ran it.
// The first exception thrown by any item is rethrown after all threads join.
template <typename F>
auto parallel_map(int n, F&& f) -> std::vector<std::invoke_result_t<F&, int>> {
  using R = std::invoke_result_t<F&, int>;
  std::vector<R> results(static_cast<size_t>(std::max(n, 0)));
  if (n <= 0) return results;

  const int workers =
      std::max(1, std::min<int>(n, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) results[static_cast<size_t>(i)] = f(i);
    return results;
  }

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_lock;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          results[static_cast<size_t>(i)] = f(i);
        } catch (...) {
          std::lock_guard<std::mutex> hold(error_lock);
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace idt
