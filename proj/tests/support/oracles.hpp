// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference computations for the test suites. Nothing here shares code with
// the library's numerical kernels.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace oracle {

/// Composite Simpson rule with `panels` (even) subintervals.
template <class F>
double simpson(F&& f, double a, double b, int panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

/// Composite Simpson on [a, b] split at the given interior points.
template <class F>
double simpson_pieces(F&& f, const std::vector<double>& edges, int panels_per_piece) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    sum += simpson(f, edges[i], edges[i + 1], panels_per_piece);
  }
  return sum;
}

/// Cumulative distribution tabulated from a density on [lo, hi]; cubic Hermite
/// interpolation between nodes uses the density as the derivative.
class TabulatedCdf {
 public:
  template <class Density>
  TabulatedCdf(Density&& density, double lo, double hi, int nodes) : lo_(lo), hi_(hi) {
    x_.resize(nodes);
    pdf_.resize(nodes);
    cdf_.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
      x_[i] = lo + (hi - lo) * i / (nodes - 1.0);
      pdf_[i] = density(x_[i]);
    }
    cdf_[0] = 0.0;
    for (int i = 1; i < nodes; ++i) {
      cdf_[i] = cdf_[i - 1] + simpson(density, x_[i - 1], x_[i], 8);
    }
    const double total = cdf_.back();
    for (int i = 0; i < nodes; ++i) {
      cdf_[i] /= total;
      pdf_[i] /= total;
    }
  }

  double operator()(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    const double h = x_[1] - x_[0];
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>((x - lo_) / h), x_.size() - 2);
    const double s = (x - x_[i]) / h;
    const double h00 = 2 * s * s * s - 3 * s * s + 1;
    const double h10 = s * s * s - 2 * s * s + s;
    const double h01 = -2 * s * s * s + 3 * s * s;
    const double h11 = s * s * s - s * s;
    return h00 * cdf_[i] + h10 * h * pdf_[i] + h01 * cdf_[i + 1] + h11 * h * pdf_[i + 1];
  }

 private:
  double lo_;
  double hi_;
  std::vector<double> x_;
  std::vector<double> pdf_;
  std::vector<double> cdf_;
};

/// One-sample Kolmogorov-Smirnov statistic; sorts `samples` in place.
template <class Cdf>
double ks_statistic(std::vector<double>& samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Asymptotic 1% critical value of the KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

inline Moments moments(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Runs a shell command and returns its exit status.
inline int run(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace oracle
