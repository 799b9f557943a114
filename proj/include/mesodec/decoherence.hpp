// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mesodec/numeric/quadrature.hpp"
#include "mesodec/parallel.hpp"
#include "mesodec/spectrum.hpp"
#include "mesodec/visibility.hpp"

namespace mesodec {

enum class RootStatus { converged, no_root, non_monotone };

inline std::string_view to_string(RootStatus s) {
  switch (s) {
    case RootStatus::converged: return "converged";
    case RootStatus::no_root: return "no_root";
    case RootStatus::non_monotone: return "non_monotone";
  }
  return "unknown";
}

struct TdecOptions {
  double t_lo = 10.0;    // K
  double t_hi = 5000.0;  // K
  double tol_T = 1e-3;   // K, final bracket width
  double level = 0.5;    // visibility defining the transition
  int max_iterations = 50;
  double rel_tol = 1e-11;  // quadrature

  void validate() const {
    if (!(t_lo > 0.0 && t_lo < t_hi)) throw std::invalid_argument("tdec: need 0 < T_lo < T_hi");
    if (!(tol_T > 0.0)) throw std::invalid_argument("tdec: tol_T must be > 0");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("tdec: level must lie in (0,1)");
  }
};

struct DecoherenceResult {
  RootStatus status = RootStatus::no_root;
  double temperature = std::numeric_limits<double>::quiet_NaN();  // K
  double lower = 0.0;  // final bracket
  double upper = 0.0;
  double h_lower = 0.0;
  double h_upper = 0.0;
  double h_root = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;

  bool ok() const { return status == RootStatus::converged; }
};

inline constexpr int kBracketProbes = 8;

/// Root of a non-decreasing h on [opts.t_lo, opts.t_hi] by validated bisection.
///
/// Monotonicity is checked on kBracketProbes equally spaced points before
/// bisecting; a violation is reported as non_monotone, a bracket without sign
/// change as no_root.
template <class H>
DecoherenceResult bisect_increasing(H&& h, const TdecOptions& opts) {
  opts.validate();
  DecoherenceResult out;
  std::array<double, kBracketProbes> probes{};
  for (int i = 0; i < kBracketProbes; ++i) {
    const double temperature =
        i == kBracketProbes - 1
            ? opts.t_hi
            : opts.t_lo + (opts.t_hi - opts.t_lo) * i / (kBracketProbes - 1.0);
    probes[i] = h(temperature);
    if (i > 0 && probes[i] < probes[i - 1] - 1e-9 * (std::abs(probes[i - 1]) + 1.0)) {
      out.status = RootStatus::non_monotone;
      return out;
    }
  }

  double lo = opts.t_lo;
  double hi = opts.t_hi;
  double h_lo = probes.front();
  double h_hi = probes.back();
  out.lower = lo;
  out.upper = hi;
  out.h_lower = h_lo;
  out.h_upper = h_hi;
  if (h_lo > 0.0 || h_hi < 0.0) {
    out.status = RootStatus::no_root;
    return out;
  }

  // Narrow to the probe interval holding the sign change.
  for (int i = 1; i < kBracketProbes; ++i) {
    if (probes[i] >= 0.0) {
      lo = opts.t_lo + (opts.t_hi - opts.t_lo) * (i - 1) / (kBracketProbes - 1.0);
      hi = i == kBracketProbes - 1 ? opts.t_hi
                                   : opts.t_lo + (opts.t_hi - opts.t_lo) * i / (kBracketProbes - 1.0);
      h_lo = probes[i - 1];
      h_hi = probes[i];
      break;
    }
  }

  int iterations = 0;
  while (hi - lo > opts.tol_T && iterations < opts.max_iterations) {
    const double mid = 0.5 * (lo + hi);
    const double h_mid = h(mid);
    ++iterations;
    if (h_mid < 0.0) {
      lo = mid;
      h_lo = h_mid;
    } else {
      hi = mid;
      h_hi = h_mid;
    }
  }

  const double mid = 0.5 * (lo + hi);
  const double h_mid = h(mid);
  double best = mid;
  double h_best = h_mid;
  if (std::abs(h_lo) < std::abs(h_best)) {
    best = lo;
    h_best = h_lo;
  }
  if (std::abs(h_hi) < std::abs(h_best)) {
    best = hi;
    h_best = h_hi;
  }
  out.status = RootStatus::converged;
  out.temperature = best;
  out.lower = lo;
  out.upper = hi;
  out.h_lower = h_lo;
  out.h_upper = h_hi;
  out.h_root = h_best;
  out.iterations = iterations;
  return out;
}

/// Solves (Lambda(T) - G(T,d)) t = ln(1/level) for T. The excess rate is
/// assumed non-decreasing in T; bisect_increasing checks it.
inline DecoherenceResult decoherence_temperature(const MoleculeParams& mol, double d, double t,
                                                 const TdecOptions& opts = {}) {
  opts.validate();
  if (!(d > 0.0 && t > 0.0)) throw std::invalid_argument("tdec: d and t must be > 0");
  const double target = std::log(1.0 / opts.level);
  return bisect_increasing(
      [&](double temperature) {
        return attenuation_deficit(mol, temperature, d, opts.rel_tol) * t - target;
      },
      opts);
}

//---------------------------------------------------------------------------//
// Parameter sweeps

enum class SweepAxis { temperature, separation, time };

inline std::string_view axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::temperature: return "T";
    case SweepAxis::separation: return "d";
    case SweepAxis::time: return "t";
  }
  return "?";
}

struct AxisSpec {
  SweepAxis axis = SweepAxis::temperature;
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  bool log = false;

  void validate() const {
    if (!(min < max)) throw std::invalid_argument("grid axis: need min < max");
    if (count < 2) throw std::invalid_argument("grid axis: need count >= 2");
    if (log && !(min > 0.0)) throw std::invalid_argument("grid axis: log spacing needs min > 0");
  }

  std::vector<double> values() const {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
      const double f = static_cast<double>(i) / (count - 1);
      out[i] = log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                   : min + f * (max - min);
    }
    out.front() = min;
    out.back() = max;
    return out;
  }
};

struct GridSpec {
  AxisSpec axis1;
  AxisSpec axis2;
  ExperimentConfig fixed;  // supplies the parameter not on an axis

  void validate() const {
    axis1.validate();
    axis2.validate();
    if (axis1.axis == axis2.axis) throw std::invalid_argument("grid: axes must be distinct");
  }

  /// Configuration at node (i, j).
  ExperimentConfig node(double v1, double v2) const {
    ExperimentConfig cfg = fixed;
    for (const auto& [spec, v] : {std::pair{axis1, v1}, std::pair{axis2, v2}}) {
      switch (spec.axis) {
        case SweepAxis::temperature: cfg.temperature = v; break;
        case SweepAxis::separation: cfg.slit_separation = v; break;
        case SweepAxis::time: cfg.flight_time = v; break;
      }
    }
    return cfg;
  }
};

struct Surface {
  GridSpec grid;
  std::vector<double> axis1_values;
  std::vector<double> axis2_values;
  std::vector<double> values;  // row-major, axis1 major; NaN marks a failed node
  int failures = 0;
  std::vector<std::string> messages;

  double at(std::size_t i, std::size_t j) const { return values[i * axis2_values.size() + j]; }
};

struct SweepOptions {
  unsigned threads = 1;
  double rel_tol = 1e-11;
};

/// Visibility on every grid node. Lambda - G depends on (T, d) only, so it is
/// evaluated once per distinct pair and reused along the time axis.
inline Surface visibility_surface(const MoleculeParams& mol, const GridSpec& grid,
                                  const SweepOptions& opts = {}) {
  grid.validate();
  mol.validate();
  Surface out;
  out.grid = grid;
  out.grid.fixed.molecule = mol;
  out.axis1_values = grid.axis1.values();
  out.axis2_values = grid.axis2.values();
  const std::size_t n1 = out.axis1_values.size();
  const std::size_t n2 = out.axis2_values.size();

  std::map<std::pair<double, double>, std::size_t> key_index;
  std::vector<std::pair<double, double>> keys;
  std::vector<std::size_t> node_key(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const ExperimentConfig cfg = out.grid.node(out.axis1_values[i], out.axis2_values[j]);
      cfg.validate();
      const std::pair<double, double> key{cfg.temperature, cfg.slit_separation};
      auto [it, inserted] = key_index.emplace(key, keys.size());
      if (inserted) keys.push_back(key);
      node_key[i * n2 + j] = it->second;
    }
  }

  std::vector<double> deficit(keys.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(keys.size());
  parallel_for(keys.size(), opts.threads, [&](std::size_t k) {
    const auto [temperature, d] = keys[k];
    if (temperature == 0.0 || d == 0.0) {
      deficit[k] = 0.0;
      return;
    }
    try {
      deficit[k] = attenuation_deficit(mol, temperature, d, opts.rel_tol);
    } catch (const numeric::QuadratureError& e) {
      errors[k] = e.what();
    }
  });

  out.values.resize(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const ExperimentConfig cfg = out.grid.node(out.axis1_values[i], out.axis2_values[j]);
      const std::size_t k = node_key[i * n2 + j];
      double& v = out.values[i * n2 + j];
      if (std::isnan(deficit[k])) {
        v = std::numeric_limits<double>::quiet_NaN();
        ++out.failures;
        out.messages.push_back(errors[k]);
      } else {
        v = std::exp(-deficit[k] * cfg.flight_time);
      }
    }
  }
  return out;
}

/// Decoherence temperature over a (d, t) grid; nodes without a converged root
/// hold NaN.
inline Surface tdec_surface(const MoleculeParams& mol, const GridSpec& grid,
                            const TdecOptions& tdec = {}, const SweepOptions& opts = {}) {
  grid.validate();
  mol.validate();
  const auto is_dt = [](SweepAxis a) { return a == SweepAxis::separation || a == SweepAxis::time; };
  if (!is_dt(grid.axis1.axis) || !is_dt(grid.axis2.axis)) {
    throw std::invalid_argument("tdec surface: axes must be d and t");
  }
  Surface out;
  out.grid = grid;
  out.grid.fixed.molecule = mol;
  out.axis1_values = grid.axis1.values();
  out.axis2_values = grid.axis2.values();
  const std::size_t n2 = out.axis2_values.size();
  const std::size_t nodes = out.axis1_values.size() * n2;
  out.values.assign(nodes, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(nodes);
  parallel_for(nodes, opts.threads, [&](std::size_t n) {
    const ExperimentConfig cfg = out.grid.node(out.axis1_values[n / n2], out.axis2_values[n % n2]);
    try {
      const DecoherenceResult r =
          decoherence_temperature(mol, cfg.slit_separation, cfg.flight_time, tdec);
      if (r.ok()) {
        out.values[n] = r.temperature;
      } else {
        errors[n] = std::string(to_string(r.status));
      }
    } catch (const numeric::QuadratureError& e) {
      errors[n] = e.what();
    }
  });
  for (std::size_t n = 0; n < nodes; ++n) {
    if (std::isnan(out.values[n])) {
      ++out.failures;
      out.messages.push_back(errors[n]);
    }
  }
  return out;
}

}  // namespace mesodec
