// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>

#include "mesodec/numeric/quadrature.hpp"

namespace mesodec::numeric {

/// sin(x)/x with a Taylor branch near the removable singularity.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

/// 1 - sinc(x), free of cancellation for small |x|.
inline double one_minus_sinc(double x) {
  if (std::abs(x) < 1.0) {
    // x^2/3! - x^4/5! + x^6/7! - ...
    const double x2 = x * x;
    double term = x2 / 6.0;
    double sum = term;
    for (int k = 2; k < 12; ++k) {
      term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term;
      if (std::abs(term) < 1e-17 * sum) break;
    }
    return sum;
  }
  return 1.0 - std::sin(x) / x;
}

namespace detail {

inline constexpr double kSiSwitchover = 30.0;

// Si(x) = pi/2 - f(x) cos x - g(x) sin x with the auxiliary functions
// expanded asymptotically; each series is cut at its smallest term.
inline double sine_integral_asymptotic(double x) {
  const double inv2 = 1.0 / (x * x);
  double f_term = 1.0;
  double f_sum = 1.0;
  double g_term = 1.0;
  double g_sum = 1.0;
  bool f_done = false;
  bool g_done = false;
  for (int k = 1; k < 200 && !(f_done && g_done); ++k) {
    if (!f_done) {
      const double next = -f_term * (2.0 * k - 1.0) * (2.0 * k) * inv2;
      if (std::abs(next) >= std::abs(f_term)) {
        f_done = true;
      } else {
        f_term = next;
        f_sum += next;
      }
    }
    if (!g_done) {
      const double next = -g_term * (2.0 * k) * (2.0 * k + 1.0) * inv2;
      if (std::abs(next) >= std::abs(g_term)) {
        g_done = true;
      } else {
        g_term = next;
        g_sum += next;
      }
    }
  }
  const double f = f_sum / x;
  const double g = g_sum * inv2;
  return std::numbers::pi / 2.0 - f * std::cos(x) - g * std::sin(x);
}

}  // namespace detail

/// Sine integral Si(x) = integral of sinc over [0, x].
///
/// Adaptive quadrature for |x| <= 30, asymptotic expansion beyond.
inline double sine_integral(double x) {
  const double ax = std::abs(x);
  double value = 0.0;
  if (ax == 0.0) {
    return 0.0;
  } else if (ax <= detail::kSiSwitchover) {
    value = integrate_adaptive([](double u) { return sinc(u); }, 0.0, ax,
                               {.rel_tol = 1e-13, .abs_tol = 0.0, .max_intervals = 200})
                .value;
  } else {
    value = detail::sine_integral_asymptotic(ax);
  }
  return x < 0.0 ? -value : value;
}

/// Si(a)/a, equal to the mean of sinc(a s) over s in [0, 1].
inline double si_ratio(double a) {
  if (std::abs(a) < 1.0) {
    // sum_k (-1)^k a^{2k} / ((2k+1) (2k+1)!)
    const double a2 = a * a;
    double fact_term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 14; ++k) {
      fact_term *= -a2 / ((2.0 * k) * (2.0 * k + 1.0));
      const double term = fact_term / (2.0 * k + 1.0);
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  return sine_integral(a) / a;
}

/// 1 - Si(a)/a, free of cancellation for small |a|.
inline double one_minus_si_ratio(double a) {
  if (std::abs(a) < 1.0) {
    const double a2 = a * a;
    double fact_term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 14; ++k) {
      fact_term *= -a2 / ((2.0 * k) * (2.0 * k + 1.0));
      const double term = -fact_term / (2.0 * k + 1.0);
      sum += term;
      if (std::abs(term) < 1e-17 * sum) break;
    }
    return sum;
  }
  return 1.0 - sine_integral(a) / a;
}

}  // namespace mesodec::numeric
