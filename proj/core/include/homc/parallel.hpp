#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace homc {

/// Splits [begin, end) into one contiguous chunk per worker and runs
/// fn(chunk_index, chunk_begin, chunk_end) on each. Callers own determinism:
/// results must be written to per-chunk slots and merged in chunk order.
template <class Fn>
void parallel_chunks(std::int64_t begin, std::int64_t end, unsigned threads, Fn&& fn) {
  const std::int64_t total = end - begin;
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (total <= 0) return;
  if (threads > static_cast<unsigned>(total)) threads = static_cast<unsigned>(total);
  if (threads == 1) {
    fn(0u, begin, end);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const std::int64_t lo = begin + total * t / threads;
    const std::int64_t hi = begin + total * (t + 1) / threads;
    pool.emplace_back([&, t, lo, hi] {
      try {
        fn(t, lo, hi);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace homc
