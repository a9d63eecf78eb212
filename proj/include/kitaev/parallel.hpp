// Static-chunked parallel loop. Each index is processed exactly once and results are
// written by index, so output never depends on the worker count.
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kitaev {

/// Hardware concurrency, at least 1.
int default_workers();

template <class Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  const std::size_t n_workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = count * w / n_workers;
      const std::size_t end = count * (w + 1) / n_workers;
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace kitaev
