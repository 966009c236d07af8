#include "sixdma/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace sixdma {

namespace {
int g_threads = 0;
thread_local bool t_in_worker = false;
}  // namespace

void set_parallel_threads(int threads) { g_threads = threads; }

int parallel_threads() {
  if (g_threads > 0) return g_threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(parallel_threads(), n);
  if (n <= 0) return;
  if (workers <= 1 || t_in_worker) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto body = [&] {
    t_in_worker = true;
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n || failed.load()) break;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        break;
      }
    }
    t_in_worker = false;
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace sixdma
