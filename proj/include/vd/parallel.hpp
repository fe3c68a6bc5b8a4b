#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vd {

/// Default worker count: VD_THREADS if set and positive, else hardware concurrency.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("VD_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Work is handed out in
/// contiguous chunks from a shared counter; fn must only write state owned by
/// index i. The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn, std::size_t chunk = 1) {
  threads = std::max(1u, threads);
  if (threads == 1 || n <= chunk) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr error;
  auto worker = [&] {
    while (true) {
      std::size_t begin;
      {
        std::lock_guard lock(mu);
        if (next >= n || error) return;
        begin = next;
        next = std::min(n, next + chunk);
      }
      std::size_t end = std::min(n, begin + chunk);
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  auto count = static_cast<unsigned>(std::min<std::size_t>(threads, (n + chunk - 1) / chunk));
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace vd
