// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <locale>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mesodec/constants.hpp"
#include "mesodec/kicks.hpp"
#include "mesodec/parallel.hpp"
#include "mesodec/random.hpp"
#include "mesodec/visibility.hpp"

namespace mesodec {

inline constexpr std::uint64_t kMinStatisticalSamples = 1000;

struct McConfig {
  std::uint64_t n_samples = 100'000;
  std::uint64_t seed = 0x5EED'2005'0C70ull;
  std::uint64_t batch_size = 4096;
  unsigned threads = 1;  // does not affect results

  void validate() const {
    if (n_samples == 0) throw std::invalid_argument("mc: n_samples must be positive");
    if (batch_size == 0) throw std::invalid_argument("mc: batch_size must be positive");
  }

  std::uint64_t batches() const { return (n_samples + batch_size - 1) / batch_size; }
  std::uint64_t batch_begin(std::uint64_t b) const { return b * batch_size; }
  std::uint64_t batch_end(std::uint64_t b) const {
    return std::min(n_samples, (b + 1) * batch_size);
  }
};

struct McEstimate {
  double f_real = 1.0;
  double f_imag = 0.0;
  double visibility_hat = 1.0;  // |F|
  double std_error = 0.0;       // of f_real
  double std_error_imag = 0.0;
  std::uint64_t n_used = 0;
};

struct EmpiricalPattern {
  FringePattern pattern;  // envelope is the closed-form I0
  std::vector<double> std_error;
  std::uint64_t n_used = 0;
};

struct McComparison {
  double v_mc = 1.0;
  double v_exact = 1.0;
  double std_error = 0.0;
  double pull = 0.0;
  double imag_pull = 0.0;
  bool flagged = false;  // |pull| > 4
};

namespace detail {

// Kick law of a configuration, or nothing when no kicks can occur.
inline std::optional<KickLaw> kick_law_for(const ExperimentConfig& cfg) {
  if (cfg.temperature == 0.0 || cfg.flight_time == 0.0) return std::nullopt;
  const auto spectrum = EmissionSpectrum::make(cfg.molecule, cfg.temperature, 1e-12);
  if (!(spectrum.total_rate > 0.0)) return std::nullopt;
  return KickLaw::make(spectrum);
}

// Sum over kicks of zeta_k dp_k, where zeta_k = 1 - t_k / t. The event times
// are left unsorted; the sum does not depend on their order.
template <class Rng>
double weighted_kick_sum(const KickLaw& law, double flight_time, Rng& rng) {
  const auto n = poisson(rng, law.rate * flight_time);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) {
    const double zeta = 1.0 - uniform01(rng);
    sum += zeta * sample_kick(law, rng);
  }
  return sum;
}

}  // namespace detail

/// Monte Carlo estimate of F = <exp(i d sum_k zeta_k dp_k / hbar)>.
inline McEstimate estimate_F(const ExperimentConfig& cfg, const McConfig& mc) {
  cfg.validate();
  mc.validate();
  const auto law = detail::kick_law_for(cfg);
  const std::uint64_t batches = mc.batches();
  std::vector<RunningMoments> re(batches);
  std::vector<RunningMoments> im(batches);
  parallel_for(batches, mc.threads, [&](std::size_t b) {
    PhiloxStream rng(mc.seed, b);
    for (std::uint64_t i = mc.batch_begin(b); i < mc.batch_end(b); ++i) {
      const double sum = law ? detail::weighted_kick_sum(*law, cfg.flight_time, rng) : 0.0;
      const double phase = cfg.slit_separation * sum / constants::hbar;
      re[b].push(std::cos(phase));
      im[b].push(std::sin(phase));
    }
  });
  const RunningMoments re_total = pairwise_combine(re);
  const RunningMoments im_total = pairwise_combine(im);
  McEstimate out;
  out.f_real = re_total.mean;
  out.f_imag = im_total.mean;
  out.visibility_hat = std::hypot(out.f_real, out.f_imag);
  out.std_error = re_total.std_error();
  out.std_error_imag = im_total.std_error();
  out.n_used = re_total.count;
  return out;
}

/// Screen intensity averaged over sampled kick histories,
/// I(x) = (m/t) < 2 |psi_slit(p)|^2 cos^2(p d / 2 hbar) > at p = m x / t + sum_k zeta_k dp_k.
inline EmpiricalPattern estimate_pattern(const ExperimentConfig& cfg, const McConfig& mc,
                                         std::span<const double> screen) {
  cfg.validate();
  mc.validate();
  if (!(cfg.flight_time > 0.0)) throw std::invalid_argument("estimate_pattern: t must be > 0");
  const auto law = detail::kick_law_for(cfg);
  const std::uint64_t batches = mc.batches();
  const std::size_t points = screen.size();
  const double m_over_t = cfg.molecule.mass / cfg.flight_time;
  const double half_phase = 0.5 * cfg.slit_separation / constants::hbar;

  std::vector<std::vector<RunningMoments>> partial(batches, std::vector<RunningMoments>(points));
  parallel_for(batches, mc.threads, [&](std::size_t b) {
    PhiloxStream rng(mc.seed, b);
    auto& acc = partial[b];
    for (std::uint64_t i = mc.batch_begin(b); i < mc.batch_end(b); ++i) {
      const double shift = law ? detail::weighted_kick_sum(*law, cfg.flight_time, rng) : 0.0;
      for (std::size_t j = 0; j < points; ++j) {
        const double p = m_over_t * screen[j] + shift;
        const double c = std::cos(p * half_phase);
        acc[j].push(m_over_t * 2.0 * slit_momentum_density(p, cfg.slit_width_momentum) * c * c);
      }
    }
  });

  EmpiricalPattern out;
  out.pattern = fringe_pattern(cfg, VisibilityResult{}, screen);
  out.std_error.resize(points);
  std::vector<RunningMoments> column(batches);
  for (std::size_t j = 0; j < points; ++j) {
    for (std::uint64_t b = 0; b < batches; ++b) column[b] = partial[b][j];
    const RunningMoments total = pairwise_combine(column);
    out.pattern.intensity[j] = total.mean;
    out.std_error[j] = total.std_error();
    out.n_used = total.count;
  }
  return out;
}

/// Pull of the Monte Carlo visibility against the closed form.
inline McComparison compare_to_closed_form(const ExperimentConfig& cfg, const McConfig& mc,
                                           double rel_tol = 1e-11) {
  const McEstimate est = estimate_F(cfg, mc);
  McComparison out;
  out.v_mc = est.visibility_hat;
  out.v_exact = visibility_closed_form(cfg, rel_tol).visibility;
  out.std_error = est.std_error;
  if (est.std_error > 0.0) {
    out.pull = (out.v_mc - out.v_exact) / est.std_error;
  } else {
    // Zero variance: no kicks were drawn, so the estimate is exact.
    out.pull = out.v_mc == out.v_exact ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), out.v_mc - out.v_exact);
  }
  out.imag_pull = est.std_error_imag > 0.0 ? est.f_imag / est.std_error_imag : 0.0;
  out.flagged = std::abs(out.pull) > 4.0;
  return out;
}

struct ValidationPoint {
  double temperature;  // K
  double slit_separation;  // m
  double flight_time;  // s
};

/// Twelve configurations with visibilities between about 0.15 and 0.9.
inline std::vector<ValidationPoint> default_validation_grid() {
  return {
      {1400.0, 1e-6, 5e-3},   {1800.0, 1e-6, 10e-3}, {1600.0, 1e-6, 3e-3},
      {1800.0, 1e-6, 2e-3},   {2000.0, 1e-6, 1e-3},  {2000.0, 1e-6, 5e-3},
      {1800.0, 0.5e-6, 5e-3}, {2200.0, 0.3e-6, 3e-3}, {2500.0, 0.2e-6, 1e-3},
      {2500.0, 0.2e-6, 5e-3}, {3000.0, 0.1e-6, 1e-3}, {3000.0, 0.1e-6, 5e-3},
  };
}

/// Trajectory dump: one line per trajectory, "n t_1 dp_1 ... t_n dp_n".
inline void write_trajectory(std::ostream& os, const KickTrajectory& traj) {
  char buf[64];
  os << traj.size();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::snprintf(buf, sizeof buf, " %.17g", traj.event_times[k]);
    os << buf;
    std::snprintf(buf, sizeof buf, " %.17g", traj.jumps[k]);
    os << buf;
  }
  os << '\n';
}

inline KickTrajectory read_trajectory(const std::string& line, double flight_time) {
  std::istringstream in(line);
  in.imbue(std::locale::classic());
  std::size_t n = 0;
  if (!(in >> n)) throw std::runtime_error("trajectory: missing event count");
  KickTrajectory traj;
  traj.flight_time = flight_time;
  for (std::size_t k = 0; k < n; ++k) {
    double t = 0.0;
    double dp = 0.0;
    if (!(in >> t >> dp)) throw std::runtime_error("trajectory: truncated line");
    traj.event_times.push_back(t);
    traj.jumps.push_back(dp);
  }
  return traj;
}

}  // namespace mesodec
