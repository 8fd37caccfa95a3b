#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace ponomarev {

/// Sum with a fixed binary tree: the result depends only on the input
/// order, never on how the terms were produced. Sums of 2^m equal terms are
/// exact.
inline double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() == 1) return v[0];
  // Split at the largest power of two below size so equal-term blocks stay
  // power-of-two sized.
  std::size_t half = 1;
  while (half * 2 < v.size()) half *= 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// out[i] = fn(i) for i in [0, count), computed on up to `workers` threads.
/// Each slot is written by exactly one thread, so the result is independent
/// of scheduling.
template <typename Fn>
auto parallel_map(std::size_t count, Fn fn, unsigned workers = 0) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<T> out(count);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk, hi = std::min(count, lo + chunk);
      pool.emplace_back([&, w, lo, hi] {
        try {
          for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace ponomarev
