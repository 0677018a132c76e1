#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace irsense {

// Indexed parallel loop. `body(worker, i)` runs item i on worker slot
// `worker` in [0, n_workers); workers own per-slot scratch. Bodies must only
// write to slots owned by their item index, and callers assemble results in
// index order afterwards, so output does not depend on scheduling.
inline void parallel_for_workers(std::size_t n, unsigned threads,
                                 const std::function<void(unsigned, std::size_t)>& body) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (threads > n) threads = static_cast<unsigned>(n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(0, i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&](unsigned slot) {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(slot, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         unsigned threads = 0) {
  parallel_for_workers(n, threads, [&](unsigned, std::size_t i) { body(i); });
}

// Number of worker slots parallel_for_workers will use for n items.
inline unsigned worker_count(std::size_t n, unsigned threads) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (threads > n) threads = static_cast<unsigned>(n);
  return threads == 0 ? 1 : threads;
}

}  // namespace irsense
