#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace singap {

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Results must be written to per-index slots; the first
/// exception thrown by any task is rethrown on the caller.
template <class F>
void parallel_for(std::size_t n, F&& fn, int threads = 0) {
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::max(1u, hw);
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex m;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lk(m);
            if (!err) err = std::current_exception();
          }
        }
      });
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace singap
