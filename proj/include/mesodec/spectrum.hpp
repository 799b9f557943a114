// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mesodec/constants.hpp"
#include "mesodec/numeric/quadrature.hpp"
#include "mesodec/random.hpp"

namespace mesodec {

//---------------------------------------------------------------------------//
/*!
 * Physical description of a hot emitting particle.
 *
 * The absorption cross section follows the power law a_ell * omega^ell and the
 * heat capacity is n_modes * k_B. n_modes may be +infinity, which drops the
 * finite-heat-capacity correction and recovers a Planck-like spectrum.
 */
struct MoleculeParams {
  std::string name;
  double n_modes = 0.0;  // N, vibrational modes
  int ell = 4;           // cross-section exponent
  double a_ell = 0.0;    // m^2 s^ell
  double mass = 0.0;     // kg

  void validate() const {
    if (!(n_modes >= 1.0)) throw std::invalid_argument("molecule: n_modes must be >= 1");
    if (ell < 1) throw std::invalid_argument("molecule: ell must be >= 1");
    if (!(a_ell > 0.0) || !std::isfinite(a_ell)) {
      throw std::invalid_argument("molecule: a_ell must be positive");
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw std::invalid_argument("molecule: mass must be positive");
    }
  }

  bool infinite_modes() const { return std::isinf(n_modes); }
};

namespace presets {

inline MoleculeParams c60() {
  return {"C60", 170.0, 4, 7.04e-66 * constants::nm2_to_m2, 720.0 * constants::atomic_mass_unit};
}

inline MoleculeParams c70() {
  return {"C70", 200.0, 4, 7.79e-66 * constants::nm2_to_m2, 840.0 * constants::atomic_mass_unit};
}

inline std::optional<MoleculeParams> by_name(std::string_view name) {
  if (name == "C60" || name == "c60") return c60();
  if (name == "C70" || name == "c70") return c70();
  return std::nullopt;
}

}  // namespace presets

/// Thermal angular frequency k_B T / hbar.
inline double thermal_frequency(double temperature) {
  return constants::boltzmann * temperature / constants::hbar;
}

inline double absorption_cross_section(const MoleculeParams& mol, double omega) {
  return mol.a_ell * std::pow(omega, mol.ell);
}

/// Integrand of the total rate in the reduced frequency x = hbar omega / k_B T:
/// x^(ell+2) exp(-x - x^2 / 2N).
inline double reduced_rate_integrand(const MoleculeParams& mol, double x, int extra_power = 0) {
  if (x <= 0.0) return 0.0;
  const double gauss = mol.infinite_modes() ? 0.0 : x * x / (2.0 * mol.n_modes);
  return std::exp((mol.ell + 2 + extra_power) * std::log(x) - x - gauss);
}

/// Upper limit of the reduced-frequency integrals. The integrand is below
/// 1e-12 of its integral well before this point.
inline double reduced_cutoff(const MoleculeParams& mol) {
  const double base = mol.ell + 3.0 + 40.0;
  if (mol.infinite_modes()) return base + 10.0 * std::sqrt(mol.ell + 3.0);
  return base + std::sqrt(2.0 * mol.n_modes * 40.0);
}

/// a_ell / (pi^2 c^2) * (k_B T / hbar)^power.
inline double rate_prefactor(const MoleculeParams& mol, double temperature, int power) {
  constexpr double c = constants::speed_of_light;
  return mol.a_ell / (constants::pi * constants::pi * c * c) *
         std::pow(thermal_frequency(temperature), power);
}

/// Dimensionless integral of x^(ell+2+extra_power) exp(-x - x^2/2N) over [0, x_max].
inline double reduced_rate_moment(const MoleculeParams& mol, int extra_power = 0,
                                  double rel_tol = 1e-12) {
  return numeric::integrate_adaptive(
             [&](double x) { return reduced_rate_integrand(mol, x, extra_power); }, 0.0,
             reduced_cutoff(mol), {.rel_tol = rel_tol, .abs_tol = 0.0, .max_intervals = 2000})
      .value;
}

/// Total photon emission rate Lambda(T) in 1/s by adaptive quadrature.
inline double total_rate_quadrature(const MoleculeParams& mol, double temperature,
                                    double rel_tol = 1e-9) {
  if (!(temperature > 0.0)) throw std::invalid_argument("total_rate: temperature must be > 0");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw std::invalid_argument("total_rate: tolerance must lie in (0, 1)");
  }
  const double prefactor = rate_prefactor(mol, temperature, mol.ell + 3);
  if (prefactor == 0.0) return 0.0;
  return prefactor * reduced_rate_moment(mol, 0, rel_tol);
}

/// Outcome of summing a divergent asymptotic series up to its smallest term.
struct SeriesResult {
  double value = 0.0;
  int last_index = 0;        // index of the last included term
  double last_term = 0.0;    // its magnitude, in the units of value
  bool diverging = false;    // the first term was not the largest
};

/// Large-N asymptotic expansion of Lambda(T), cut at the smallest term.
inline SeriesResult total_rate_series(const MoleculeParams& mol, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("total_rate: temperature must be > 0");
  if (!(mol.n_modes >= 10.0)) {
    throw std::invalid_argument("total_rate_series: requires n_modes >= 10");
  }
  const double prefactor = rate_prefactor(mol, temperature, mol.ell + 3);
  const int l = mol.ell;

  // term_0 = (l+2)!; term_{m+1}/term_m = -(2m+l+3)(2m+l+4) / (2N (m+1)).
  double term = std::tgamma(l + 3.0);
  double sum = term;
  SeriesResult out;
  out.last_index = 0;
  out.last_term = std::abs(term);
  if (mol.infinite_modes()) {
    out.value = prefactor * sum;
    out.last_term *= prefactor;
    return out;
  }
  const int max_index = static_cast<int>(mol.n_modes);
  for (int m = 0; m < max_index; ++m) {
    const double next =
        -term * (2.0 * m + l + 3.0) * (2.0 * m + l + 4.0) / (2.0 * mol.n_modes * (m + 1.0));
    if (std::abs(next) >= std::abs(term)) {
      if (m == 0) out.diverging = true;
      break;
    }
    term = next;
    sum += term;
    out.last_index = m + 1;
    out.last_term = std::abs(term);
  }
  out.value = prefactor * sum;
  out.last_term *= prefactor;
  return out;
}

//---------------------------------------------------------------------------//
/// Emission spectrum of a molecule at a fixed internal temperature.
struct EmissionSpectrum {
  MoleculeParams molecule;
  double temperature = 0.0;  // K
  double total_rate = 0.0;   // 1/s

  static EmissionSpectrum make(const MoleculeParams& mol, double temperature,
                               double rel_tol = 1e-10) {
    mol.validate();
    return {mol, temperature, total_rate_quadrature(mol, temperature, rel_tol)};
  }
};

/// Spectral photon emission rate R_T(omega), in 1/s per rad/s.
inline double emission_rate_density(const EmissionSpectrum& spec, double omega) {
  if (omega <= 0.0) return 0.0;
  const double x = omega / thermal_frequency(spec.temperature);
  return rate_prefactor(spec.molecule, spec.temperature, spec.molecule.ell + 2) *
         reduced_rate_integrand(spec.molecule, x);
}

/// Draws omega from R_T(omega) / Lambda(T).
///
/// The reduced frequency x has density proportional to
/// x^(ell+2) e^(-x) e^(-x^2/2N); Gamma(ell+3) proposals are accepted with
/// probability e^(-x^2/2N) <= 1.
template <class Rng>
double sample_frequency(const EmissionSpectrum& spec, Rng& rng) {
  const MoleculeParams& mol = spec.molecule;
  const double scale = thermal_frequency(spec.temperature);
  constexpr int kMaxTries = 1'000'000;
  for (int i = 0; i < kMaxTries; ++i) {
    const double x = gamma_integer_shape(rng, mol.ell + 3);
    if (mol.infinite_modes()) return x * scale;
    if (uniform01(rng) < std::exp(-x * x / (2.0 * mol.n_modes))) return x * scale;
  }
  throw std::runtime_error("sample_frequency: rejection loop exhausted; spectrum is malformed");
}

}  // namespace mesodec
