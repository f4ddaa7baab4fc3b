#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace translasso {

// Global worker-count bound (0 = hardware concurrency). Results never depend
// on the thread count: each work item writes only its own slot.
void set_max_threads(int n);
int max_threads();

namespace detail {
inline thread_local bool in_parallel_region = false;
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
  if (n == 0) return;
  int t = max_threads();
  if (t <= 0) t = 1;
  if (static_cast<std::size_t>(t) > n) t = static_cast<int>(n);
  if (t == 1 || detail::in_parallel_region) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(t);
  for (int w = 0; w < t; ++w) {
    workers.emplace_back([&]() {
      detail::in_parallel_region = true;
      for (;;) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n || failed.load(std::memory_order_relaxed)) break;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    });
  }
  for (auto& th : workers) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace translasso
