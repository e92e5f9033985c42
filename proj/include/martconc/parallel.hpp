#pragma once

/*
 * Deterministic chunked parallelism for Monte Carlo loops.
 *
 * Work is split into fixed chunks identified by index; each chunk owns its
 * own RandomStream substream, threads grab chunk indices from an atomic
 * counter, and partial results land in a slot per chunk. The caller reduces
 * the slots in index order, so the result is independent of thread count
 * and scheduling.
 */

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace martconc::detail {

inline unsigned hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1u : n;
}

/* fn(chunk_index) -> Partial, evaluated for chunk_index in [0, num_chunks). */
template <class Partial, class ChunkFn>
std::vector<Partial> run_chunks(std::size_t num_chunks, ChunkFn fn,
                                unsigned threads = 0) {
  std::vector<Partial> out(num_chunks);
  if (num_chunks == 0) return out;
  if (threads == 0) threads = hardware_threads();
  if (threads > num_chunks) threads = unsigned(num_chunks);
  if (threads <= 1) {
    for (std::size_t i = 0; i < num_chunks; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= num_chunks) return;
      out[i] = fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

/* Compensated (Kahan) accumulator for long Monte Carlo sums. */
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace martconc::detail
