#include "translasso/parallel.hpp"

namespace translasso {

static std::atomic<int> g_max_threads{0};

void set_max_threads(int n) { g_max_threads.store(n, std::memory_order_relaxed); }

int max_threads() {
  int n = g_max_threads.load(std::memory_order_relaxed);
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
  }
  return n;
}

}  // namespace translasso
