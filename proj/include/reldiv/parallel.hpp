#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace reldiv {

/// Splits [0, n) into contiguous chunks and runs body(worker, lo, hi) on up to
/// `threads` workers. Worker w always gets the w-th chunk, so per-worker
/// scratch can be indexed by w. The first exception thrown is rethrown.
template <class Body>
void parallel_chunks(std::size_t n, unsigned threads, Body&& body) {
  threads = std::max(1u, threads);
  if (n == 0) return;
  if (threads == 1 || n < 2) {
    body(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t lo = std::min(n, t * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo < hi) body(static_cast<std::size_t>(t), lo, hi);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Runs body(i) for i in [0, n). Callers write results into per-index slots,
/// so the outcome never depends on the worker count.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  if (n < 2 * static_cast<std::size_t>(std::max(1u, threads))) threads = 1;
  parallel_chunks(n, threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) body(i);
  });
}

}  // namespace reldiv
