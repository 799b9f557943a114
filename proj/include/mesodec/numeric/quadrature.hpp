// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mesodec::numeric {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  int evaluations = 0;
};

struct AdaptiveOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651146};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool splittable;
};

// One G10/K21 panel with the QUADPACK error heuristic.
template <class F>
Panel kronrod21(F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f_center = f(center);
  double kronrod = f_center * kKronrodWeights[10];
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  std::array<double, 10> f_left{};
  std::array<double, 10> f_right{};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double fl = f(center - dx);
    const double fr = f(center + dx);
    f_left[j] = fl;
    f_right[j] = fr;
    kronrod += kKronrodWeights[j] * (fl + fr);
    abs_sum += kKronrodWeights[j] * (std::abs(fl) + std::abs(fr));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (fl + fr);
  }

  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(f_center - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    asc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
  }

  const double value = kronrod * half;
  const double res_abs = abs_sum * std::abs(half);
  const double res_asc = asc * std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  if (res_asc != 0.0 && error != 0.0) {
    error = res_asc * std::min(1.0, std::pow(200.0 * error / res_asc, 1.5));
  }
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    error = std::max(50.0 * eps * res_abs, error);
  }
  const bool splittable = std::abs(b - a) > 1e3 * eps * std::max(std::abs(a), std::abs(b));
  return {a, b, value, error, splittable};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (G10/K21) integration over the finite
// interval [a, b]. Throws QuadratureError when the tolerance cannot be met
// within max_intervals panels.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opts = {}) {
  if (a == b) return {};
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw QuadratureError("integrate_adaptive: integration limits must be finite");
  }
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) std::swap(a, b);

  auto by_error = [](const detail::Panel& l, const detail::Panel& r) {
    const double le = l.splittable ? l.error : -1.0;
    const double re = r.splittable ? r.error : -1.0;
    return le < re;
  };

  std::vector<detail::Panel> heap;
  heap.reserve(64);
  heap.push_back(detail::kronrod21(f, a, b));
  int evaluations = 21;

  for (;;) {
    double total = 0.0;
    double error = 0.0;
    for (const auto& p : heap) {
      total += p.value;
      error += p.error;
    }
    if (!std::isfinite(total) || !std::isfinite(error)) {
      throw QuadratureError("integrate_adaptive: non-finite integrand on [" + std::to_string(a) +
                            ", " + std::to_string(b) + "]");
    }
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    if (error <= target) {
      return {sign * total, error, static_cast<int>(heap.size()), evaluations};
    }
    if (static_cast<int>(heap.size()) >= opts.max_intervals || !heap.front().splittable) {
      throw QuadratureError("integrate_adaptive: tolerance " + std::to_string(opts.rel_tol) +
                            " not reached (estimated error " + std::to_string(error) + " on |I|=" +
                            std::to_string(std::abs(total)) + " with " +
                            std::to_string(heap.size()) + " panels)");
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const detail::Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    heap.push_back(detail::kronrod21(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(detail::kronrod21(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), by_error);
    evaluations += 42;
  }
}

/// Gauss-Legendre rule of arbitrary order on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int order) : nodes(order), weights(order) {
    if (order < 1) throw std::invalid_argument("GaussLegendreRule: order must be >= 1");
    const int n = order;
    if (n == 1) {
      nodes[0] = 0.0;
      weights[0] = 2.0;
      return;
    }
    // Returns {P_n(x), P_n'(x)} by the three-term recurrence.
    auto legendre = [n](double x) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      return std::array<double, 2>{p1, n * (x * p1 - p0) / (x * x - 1.0)};
    };
    for (int i = 0; i < n / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      for (int iter = 0; iter < 100; ++iter) {
        const auto [p, dp] = legendre(x);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double dp = legendre(x)[1];
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
      const double dp = legendre(0.0)[1];
      nodes[n / 2] = 0.0;
      weights[n / 2] = 2.0 / (dp * dp);
    }
  }

  int order() const { return static_cast<int>(nodes.size()); }
};

template <class F>
double integrate_gauss(F&& f, double a, double b, const GaussLegendreRule& rule) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(center + half * rule.nodes[i]);
  }
  return sum * half;
}

/// Fixed-order composite Gauss-Legendre over `panels` equal sub-intervals.
template <class F>
double integrate_composite_gauss(F&& f, double a, double b, int panels,
                                 const GaussLegendreRule& rule) {
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    sum += integrate_gauss(f, a + p * width, a + (p + 1) * width, rule);
  }
  return sum;
}

}  // namespace mesodec::numeric
