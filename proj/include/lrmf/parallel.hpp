#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lrmf {

/// Runs f(0), ..., f(count-1) across up to `threads` workers. Each index must
/// write only its own output slot; the first exception thrown by any worker is
/// rethrown on the calling thread after all workers join.
inline void parallel_for(int count, const std::function<void(int)>& f,
                         unsigned threads = 0) {
  if (count <= 0) return;
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || count == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lrmf
