#pragma once

// Deterministic block parallelism: work splits into a block grid that does
// not depend on the worker count, and per-block results merge in block
// order, so outputs are identical for any number of threads.

#include <atomic>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace fpgeom {

inline std::size_t default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

inline void parallel_blocks(std::size_t nblocks, std::size_t threads,
                            const std::function<void(std::size_t)>& run) {
  if (nblocks == 0) return;
  if (threads <= 1 || nblocks == 1) {
    for (std::size_t b = 0; b < nblocks; ++b) run(b);
    return;
  }
  threads = std::min(threads, nblocks);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= nblocks || failed.load()) return;
      try {
        run(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Splits [0, n) into at most max_blocks contiguous ranges; the grid depends
// only on n and max_blocks.
inline std::vector<std::pair<std::size_t, std::size_t>> block_ranges(
    std::size_t n, std::size_t max_blocks = 64) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n == 0) return out;
  std::size_t nblocks = std::min(n, max_blocks);
  std::size_t base = n / nblocks, extra = n % nblocks, begin = 0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    std::size_t len = base + (b < extra ? 1 : 0);
    out.emplace_back(begin, begin + len);
    begin += len;
  }
  return out;
}

}  // namespace fpgeom
