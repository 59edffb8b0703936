#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dclab::detail {

inline std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) on up to `threads` workers. Indices are claimed
/// in increasing order; `keep_going(i)` is consulted before each claim.
template <typename Body, typename KeepGoing>
void parallel_for(std::size_t n, std::size_t threads, Body&& body, KeepGoing&& keep_going) {
  threads = std::min(resolve_threads(threads), std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || !keep_going(i)) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

template <typename Body>
void parallel_for(std::size_t n, std::size_t threads, Body&& body) {
  parallel_for(n, threads, std::forward<Body>(body), [](std::size_t) { return true; });
}

}  // namespace dclab::detail
