// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace mesodec {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items must
/// write only to their own output slots; the result is then independent of
/// the worker count. The exception of the lowest failing index is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (count == 0) return;
  std::vector<std::exception_ptr> errors(count);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Recursive pairwise sum with a fixed tree shape.
inline double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double sum = 0.0;
    for (const double v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

/// Count, mean and centred sum of squares of a sample (Welford / Chan).
struct RunningMoments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  static RunningMoments combine(const RunningMoments& a, const RunningMoments& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    RunningMoments out;
    out.count = a.count + b.count;
    const double n = static_cast<double>(out.count);
    const double delta = b.mean - a.mean;
    out.mean = a.mean + delta * static_cast<double>(b.count) / n;
    out.m2 = a.m2 + b.m2 +
             delta * delta * static_cast<double>(a.count) * static_cast<double>(b.count) / n;
    return out;
  }

  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_error() const {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

/// Pairwise (fixed-tree) reduction of per-batch moments.
inline RunningMoments pairwise_combine(std::span<const RunningMoments> parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts.front();
  const std::size_t half = parts.size() / 2;
  return RunningMoments::combine(pairwise_combine(parts.first(half)),
                                 pairwise_combine(parts.subspan(half)));
}

}  // namespace mesodec
