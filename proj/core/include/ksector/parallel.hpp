#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ksector {

/// Caps worker parallelism inside an operation. Results never depend on it.
struct Exec {
  unsigned threads = 1;
};

/// Runs fn(i) for i in [begin, end), splitting the range into contiguous blocks,
/// one per worker. `fn` must only write to outputs owned by index i. An exception
/// thrown by `fn` is rethrown after all workers have finished.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, const Exec& exec, Fn&& fn) {
  const std::size_t n = end > begin ? end - begin : 0;
  const std::size_t workers = std::min<std::size_t>(std::max(1u, exec.threads), n);
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t block = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = begin + w * block;
      const std::size_t hi = std::min(end, lo + block);
      if (lo >= hi) break;
      pool.emplace_back([lo, hi, &fn, &error = errors[w]] {
        try {
          for (std::size_t i = lo; i < hi; ++i) fn(i);
        } catch (...) {
          error = std::current_exception();
        }
      });
    }
  }
  // the lowest failing block wins, so the rethrown error does not depend on timing
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ksector
