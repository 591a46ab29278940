#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cod::detail {

/// Worker cap: COD_THREADS when set, hardware concurrency otherwise.
inline unsigned max_threads() {
  if (const char* s = std::getenv("COD_THREADS")) {
    long v = std::atol(s);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

/// Runs fn(0..count-1) across worker threads; results must be written to
/// per-index slots so the merge stays deterministic. Rethrows the first
/// exception raised by any worker.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  std::size_t threads = std::min<std::size_t>(max_threads(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace cod::detail
