// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "mesodec/constants.hpp"
#include "mesodec/kicks.hpp"
#include "mesodec/numeric/quadrature.hpp"
#include "mesodec/numeric/special.hpp"
#include "mesodec/spectrum.hpp"

namespace mesodec {

/// Momentum width hbar / (2 w) of the Gaussian single-slit state of width w.
inline double slit_momentum_width(double slit_width) { return constants::hbar / (2.0 * slit_width); }

inline constexpr double kMaxSlitSeparation = 1e-4;  // m

struct ExperimentConfig {
  MoleculeParams molecule;
  double temperature = 0.0;      // K
  double slit_separation = 0.0;  // m
  double flight_time = 0.0;      // s
  double slit_width_momentum = slit_momentum_width(100e-9);  // kg m/s

  // Zero temperature, separation or flight time are accepted as the exact
  // V = 1 limits.
  void validate() const {
    molecule.validate();
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
      throw std::invalid_argument("config: temperature must be >= 0");
    }
    if (!(slit_separation >= 0.0) || slit_separation > kMaxSlitSeparation) {
      throw std::invalid_argument("config: slit separation must lie in [0, 1e-4] m");
    }
    if (!(flight_time >= 0.0) || !std::isfinite(flight_time)) {
      throw std::invalid_argument("config: flight time must be >= 0");
    }
    if (!(slit_width_momentum > 0.0)) {
      throw std::invalid_argument("config: slit momentum width must be > 0");
    }
  }
};

struct VisibilityResult {
  double visibility = 1.0;
  double phase = 0.0;     // rad
  double lambda = 0.0;    // 1/s
  double g_factor = 0.0;  // 1/s
  double zeta = 0.0;
};

struct FringePattern {
  std::vector<double> positions;  // m
  std::vector<double> intensity;  // 1/m
  std::vector<double> envelope;   // 1/m
};

/// d k_B T / (hbar c): slit separation in units of the thermal photon wavelength.
inline double reduced_separation(double temperature, double d) {
  return d * thermal_frequency(temperature) / constants::speed_of_light;
}

/// G(T, d): rate of kicks too weak to resolve the slit separation, with the
/// flight-time average of sinc done in closed form through Si.
inline double g_attenuation_quadrature(const MoleculeParams& mol, double temperature, double d,
                                       double rel_tol = 1e-9) {
  if (!(temperature > 0.0)) throw std::invalid_argument("G: temperature must be > 0");
  if (!(d >= 0.0)) throw std::invalid_argument("G: d must be >= 0");
  if (d == 0.0) return total_rate_quadrature(mol, temperature, rel_tol);
  const double scale = reduced_separation(temperature, d);
  const double prefactor = rate_prefactor(mol, temperature, mol.ell + 3);
  if (prefactor == 0.0) return 0.0;
  return prefactor * numeric::integrate_adaptive(
                         [&](double x) {
                           return reduced_rate_integrand(mol, x) * numeric::si_ratio(x * scale);
                         },
                         0.0, reduced_cutoff(mol),
                         {.rel_tol = rel_tol, .abs_tol = 0.0, .max_intervals = 2000})
                         .value;
}

/// Lambda(T) - G(T, d) as a single integral with a cancellation-free kernel.
inline double attenuation_deficit(const MoleculeParams& mol, double temperature, double d,
                                  double rel_tol = 1e-10) {
  if (!(temperature > 0.0)) throw std::invalid_argument("deficit: temperature must be > 0");
  if (!(d >= 0.0)) throw std::invalid_argument("deficit: d must be >= 0");
  if (d == 0.0) return 0.0;
  const double scale = reduced_separation(temperature, d);
  const double prefactor = rate_prefactor(mol, temperature, mol.ell + 3);
  if (prefactor == 0.0) return 0.0;
  return prefactor *
         numeric::integrate_adaptive(
             [&](double x) {
               return reduced_rate_integrand(mol, x) * numeric::one_minus_si_ratio(x * scale);
             },
             0.0, reduced_cutoff(mol), {.rel_tol = rel_tol, .abs_tol = 0.0, .max_intervals = 2000})
             .value;
}

namespace detail {

// sin(k arctan x) / (x (1 + x^2)^(k/2)); tends to k at x = 0.
inline double attenuation_kernel(int k, double x) {
  if (k * x < 1e-4) {
    const double kk = k;
    const double binom3 = kk * (kk - 1.0) * (kk - 2.0) / 6.0;
    return kk - (binom3 + kk * kk) * x * x;
  }
  return std::sin(k * std::atan(x)) * std::exp(-0.5 * k * std::log1p(x * x)) / x;
}

// (1/D) * integral over [0, D] of the kernel, as a mean over s in [0, 1].
inline double attenuation_kernel_mean(int k, double reduced_d, double rel_tol) {
  if (reduced_d == 0.0) return k;
  return numeric::integrate_adaptive(
             [&](double s) { return attenuation_kernel(k, reduced_d * s); }, 0.0, 1.0,
             {.rel_tol = rel_tol, .abs_tol = 1e-15 * k, .max_intervals = 2000})
      .value;
}

}  // namespace detail

/// Large-N asymptotic expansion of G(T, d).
///
/// Term m carries (-1)^m (2m+l+1)! / ((2N)^m m!) times the mean of the
/// attenuation kernel of order 2m+l+2. The kernel mean is bounded by its order,
/// so truncation is decided on the envelope |coefficient| * order, which is the
/// Lambda series term; the sum runs up to the envelope's smallest term.
inline SeriesResult g_attenuation_series(const MoleculeParams& mol, double temperature, double d,
                                         double rel_tol = 1e-12) {
  if (!(temperature > 0.0)) throw std::invalid_argument("G series: temperature must be > 0");
  if (!(mol.n_modes >= 10.0)) throw std::invalid_argument("G series: requires n_modes >= 10");
  if (!(d >= 0.0)) throw std::invalid_argument("G series: d must be >= 0");
  const double prefactor = rate_prefactor(mol, temperature, mol.ell + 3);
  const double reduced_d = reduced_separation(temperature, d);
  const int l = mol.ell;

  double coefficient = std::tgamma(l + 2.0);  // (l+1)!
  SeriesResult out;
  double envelope = coefficient * (l + 2);
  double term = coefficient * detail::attenuation_kernel_mean(l + 2, reduced_d, rel_tol);
  double sum = term;
  out.last_term = std::abs(term);
  const int max_index = mol.infinite_modes() ? 0 : static_cast<int>(mol.n_modes);
  for (int m = 0; m < max_index; ++m) {
    const double next_coefficient =
        -coefficient * (2.0 * m + l + 2.0) * (2.0 * m + l + 3.0) / (2.0 * mol.n_modes * (m + 1.0));
    const int k = 2 * (m + 1) + l + 2;
    const double next_envelope = std::abs(next_coefficient) * k;
    if (next_envelope >= envelope) {
      if (m == 0) out.diverging = true;
      break;
    }
    coefficient = next_coefficient;
    envelope = next_envelope;
    term = coefficient * detail::attenuation_kernel_mean(k, reduced_d, rel_tol);
    sum += term;
    out.last_index = m + 1;
    out.last_term = std::abs(term);
  }
  out.value = prefactor * sum;
  out.last_term *= prefactor;
  return out;
}

/// Closed-form visibility V = exp(-(Lambda - G) t) with phase 0.
inline VisibilityResult visibility_closed_form(const ExperimentConfig& cfg, double rel_tol = 1e-11) {
  cfg.validate();
  VisibilityResult out;
  if (cfg.temperature == 0.0) return out;
  out.lambda = total_rate_quadrature(cfg.molecule, cfg.temperature, rel_tol);
  const double deficit =
      attenuation_deficit(cfg.molecule, cfg.temperature, cfg.slit_separation, rel_tol);
  out.g_factor = out.lambda - deficit;
  out.zeta = out.lambda > 0.0 ? deficit / out.lambda : 0.0;
  out.visibility = std::exp(-deficit * cfg.flight_time);
  return out;
}

/// Visibility through the kick process: exp(-Lambda zeta t), with zeta from
/// the characteristic function of the jump law.
inline double visibility_from_kicks(const ExperimentConfig& cfg, const ZetaOptions& opts = {}) {
  cfg.validate();
  if (cfg.temperature == 0.0 || cfg.flight_time == 0.0 || cfg.slit_separation == 0.0) return 1.0;
  const auto law = KickLaw::make(EmissionSpectrum::make(cfg.molecule, cfg.temperature, 1e-13));
  const double zeta = zeta_factor(law, cfg.slit_separation, opts);
  return std::exp(-law.rate * zeta * cfg.flight_time);
}

/// Normal density of the single-slit momentum distribution |psi_slit(p)|^2.
inline double slit_momentum_density(double p, double width) {
  const double z = p / width;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * constants::pi) * width);
}

/// Fringe spacing 2 pi hbar t / (m d) on the screen.
inline double fringe_period(const ExperimentConfig& cfg) {
  return 2.0 * constants::pi * constants::hbar * cfg.flight_time /
         (cfg.molecule.mass * cfg.slit_separation);
}

/// Far-field intensity I = I0 [1 + V cos(m d x / (hbar t) + phase)].
inline FringePattern fringe_pattern(const ExperimentConfig& cfg, const VisibilityResult& vis,
                                    std::span<const double> screen) {
  if (!(cfg.flight_time > 0.0)) throw std::invalid_argument("fringe_pattern: t must be > 0");
  FringePattern out;
  out.positions.assign(screen.begin(), screen.end());
  out.intensity.reserve(screen.size());
  out.envelope.reserve(screen.size());
  const double m_over_t = cfg.molecule.mass / cfg.flight_time;
  const double wavenumber = m_over_t * cfg.slit_separation / constants::hbar;
  for (const double x : screen) {
    const double envelope = m_over_t * slit_momentum_density(m_over_t * x, cfg.slit_width_momentum);
    out.envelope.push_back(envelope);
    out.intensity.push_back(envelope * (1.0 + vis.visibility * std::cos(wavenumber * x + vis.phase)));
  }
  return out;
}

/// Flight time in units of m d^2 / hbar; values >= 10 indicate the far field.
inline double far_field_check(const ExperimentConfig& cfg) {
  if (cfg.slit_separation == 0.0) return std::numeric_limits<double>::infinity();
  return cfg.flight_time * constants::hbar /
         (cfg.molecule.mass * cfg.slit_separation * cfg.slit_separation);
}

struct ActionExchange {
  double dp_total = 0.0;       // kg m/s
  double action_ratio = 0.0;   // dp_total d / hbar, interference needs <~ 1
  double thermal_ratio = 0.0;  // k_B T t / hbar, must be >> 1
};

/// Random-walk recoil sqrt(Lambda t) * dp_rms compared against hbar.
inline ActionExchange action_exchange_check(const ExperimentConfig& cfg, double rel_tol = 1e-10) {
  cfg.validate();
  ActionExchange out;
  out.thermal_ratio =
      constants::boltzmann * cfg.temperature * cfg.flight_time / constants::hbar;
  if (cfg.temperature == 0.0 || cfg.flight_time == 0.0) return out;
  const auto spectrum = EmissionSpectrum::make(cfg.molecule, cfg.temperature, rel_tol);
  if (!(spectrum.total_rate > 0.0)) return out;
  const auto law = KickLaw::make(spectrum);
  out.dp_total = std::sqrt(law.rate * cfg.flight_time) * kick_rms(law);
  out.action_ratio = out.dp_total * cfg.slit_separation / constants::hbar;
  return out;
}

}  // namespace mesodec
