// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace mesodec {

//---------------------------------------------------------------------------//
/*!
 * Counter-based random stream built on the Philox4x32-10 bijection.
 *
 * A stream is identified by a 64-bit seed (the key) and a 64-bit stream id
 * (the upper half of the counter). Streams with different ids never overlap,
 * so parallel work can derive one independent stream per batch from a single
 * root seed without any shared state. Satisfies UniformRandomBitGenerator.
 */
class PhiloxStream {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  PhiloxStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_id_(stream_id) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 0) {
      Block counter{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                    static_cast<std::uint32_t>(stream_id_),
                    static_cast<std::uint32_t>(stream_id_ >> 32)};
      buffer_ = philox(counter, key_);
      ++block_;
    }
    const result_type out = (static_cast<result_type>(buffer_[2 * lane_]) << 32) |
                            static_cast<result_type>(buffer_[2 * lane_ + 1]);
    lane_ ^= 1;
    return out;
  }

  /// Independent stream sharing this stream's seed.
  PhiloxStream child(std::uint64_t stream_id) const { return PhiloxStream(seed(), stream_id); }

  std::uint64_t seed() const {
    return static_cast<std::uint64_t>(key_[0]) | (static_cast<std::uint64_t>(key_[1]) << 32);
  }
  std::uint64_t stream_id() const { return stream_id_; }

  /// The raw ten-round bijection, exposed for known-answer testing.
  static Block philox(Block ctr, Key key) {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += w0;
        key[1] += w1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  Key key_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  unsigned lane_ = 0;
};

// Distributions below are written out rather than taken from <random> so that
// draws are reproducible across standard library implementations.

/// Uniform on [0, 1) with 53 random bits.
template <class Rng>
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on the open interval (0, 1); safe to take the logarithm of.
template <class Rng>
double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

template <class Rng>
double standard_exponential(Rng& rng) {
  return -std::log(uniform_open01(rng));
}

/// Gamma variate with integer shape k and unit scale: a sum of k exponentials.
template <class Rng>
double gamma_integer_shape(Rng& rng, int k) {
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += standard_exponential(rng);
  return sum;
}

/// Poisson variate. Large means are split into chunks of at most 16 and the
/// chunk counts (each drawn by CDF inversion) are summed; the sum of
/// independent Poisson variables is Poisson, so the law is exact.
template <class Rng>
std::uint64_t poisson(Rng& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson: mean must be finite and non-negative");
  }
  constexpr double chunk = 16.0;
  std::uint64_t total = 0;
  double remaining = mean;
  while (remaining > 0.0) {
    const double mu = remaining > chunk ? chunk : remaining;
    remaining -= mu;
    const double u = uniform01(rng);
    double p = std::exp(-mu);
    double cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf && k < 1000) {
      ++k;
      p *= mu / static_cast<double>(k);
      cdf += p;
    }
    total += k;
  }
  return total;
}

}  // namespace mesodec
