#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace wedge {

// Runs fn(i) for every i in [0, total) across `workers` threads pulling from
// an atomic counter. fn must tolerate concurrent calls on distinct i; for
// reproducible results independent of the worker count, fn should write to
// slot i or add to commutative integer accumulators only. The first
// exception thrown by any fn is rethrown after all threads join.
inline void parallel_for(long long total, int workers,
                         const std::function<void(long long)>& fn) {
  if (workers <= 1 || total <= 1) {
    for (long long i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto body = [&] {
    while (true) {
      const long long i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= total) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = workers < static_cast<int>(total)
                        ? workers
                        : static_cast<int>(total);
  pool.reserve(static_cast<std::size_t>(count));
  for (int w = 0; w < count; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wedge
