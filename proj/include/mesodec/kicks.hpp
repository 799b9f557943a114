// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mesodec/constants.hpp"
#include "mesodec/numeric/quadrature.hpp"
#include "mesodec/numeric/special.hpp"
#include "mesodec/random.hpp"
#include "mesodec/spectrum.hpp"

namespace mesodec {

/// Momentum carried by a photon of energy k_B T: k_B T / c.
inline double thermal_momentum(double temperature) {
  return constants::boltzmann * temperature / constants::speed_of_light;
}

//---------------------------------------------------------------------------//
/*!
 * Law of a single recoil kick projected on the slit axis.
 *
 * Photons are emitted isotropically with frequency drawn from the emission
 * spectrum; the projected jump is (hbar omega / c) u with u uniform on
 * [-1, 1]. The jump density W is therefore symmetric and the kicks arrive as
 * a Poisson process of intensity `rate`.
 */
struct KickLaw {
  EmissionSpectrum spectrum;
  double rate = 0.0;  // 1/s

  static KickLaw make(const EmissionSpectrum& spectrum) {
    if (!(spectrum.total_rate > 0.0)) {
      throw std::invalid_argument("KickLaw: emission rate must be positive");
    }
    return {spectrum, spectrum.total_rate};
  }

  const MoleculeParams& molecule() const { return spectrum.molecule; }
  double temperature() const { return spectrum.temperature; }

  /// Integral of the reduced rate integrand, Lambda / prefactor.
  double reduced_norm() const {
    return rate / rate_prefactor(molecule(), temperature(), molecule().ell + 3);
  }
};

/// One realization of the compound Poisson kick process over a flight.
struct KickTrajectory {
  double flight_time = 0.0;
  std::vector<double> event_times;  // ascending, in [0, flight_time]
  std::vector<double> jumps;        // kg m/s

  std::size_t size() const { return event_times.size(); }
};

/// One-dimensional jump density W(dp) in (kg m/s)^-1.
inline double w_density(const KickLaw& law, double dp, double rel_tol = 1e-10) {
  const MoleculeParams& mol = law.molecule();
  const double lower = std::abs(dp) / thermal_momentum(law.temperature());
  const double upper = reduced_cutoff(mol);
  if (lower >= upper) return 0.0;
  const double tail =
      numeric::integrate_adaptive([&](double x) { return reduced_rate_integrand(mol, x, -1); },
                                  lower, upper, {.rel_tol = rel_tol, .abs_tol = 0.0,
                                                 .max_intervals = 2000})
          .value;
  // W = c / (2 hbar Lambda) * integral of R_T(omega) / omega above c|dp|/hbar.
  return constants::speed_of_light / (2.0 * constants::hbar * law.rate) *
         rate_prefactor(mol, law.temperature(), mol.ell + 2) * tail;
}

namespace detail {

template <class Kernel>
double spectral_average(const KickLaw& law, double x, Kernel kernel, double rel_tol) {
  const MoleculeParams& mol = law.molecule();
  const double norm = law.reduced_norm();
  // omega x / c expressed in the reduced frequency.
  const double scale = x * thermal_frequency(law.temperature()) / constants::speed_of_light;
  const double integral =
      numeric::integrate_adaptive(
          [&](double y) { return reduced_rate_integrand(mol, y) * kernel(y * scale); }, 0.0,
          reduced_cutoff(mol), {.rel_tol = rel_tol, .abs_tol = 1e-15 * norm, .max_intervals = 4000})
          .value;
  return integral / norm;
}

}  // namespace detail

/// f(x) = <exp(i x dp / hbar)>, real because W is symmetric.
inline double characteristic_function(const KickLaw& law, double x, double rel_tol = 1e-10) {
  if (x == 0.0) return 1.0;
  return detail::spectral_average(law, x, [](double a) { return numeric::sinc(a); }, rel_tol);
}

/// 1 - f(x), computed without cancellation when f is close to one.
inline double one_minus_characteristic(const KickLaw& law, double x, double rel_tol = 1e-12) {
  if (x == 0.0) return 0.0;
  return detail::spectral_average(law, x, [](double a) { return numeric::one_minus_sinc(a); },
                                  rel_tol);
}

struct ZetaOptions {
  int initial_order = 32;
  double rel_change = 1e-9;
  int max_order = 1024;
  double rel_tol = 1e-12;  // inner omega quadrature
};

/// Geometric factor zeta(d) = integral over s in [0,1] of 1 - f(s d).
inline double zeta_factor(const KickLaw& law, double d, const ZetaOptions& opts = {}) {
  if (d < 0.0) throw std::invalid_argument("zeta_factor: d must be >= 0");
  if (d == 0.0) return 0.0;
  auto integrand = [&](double s) { return one_minus_characteristic(law, s * d, opts.rel_tol); };
  int order = opts.initial_order;
  double previous = numeric::integrate_gauss(integrand, 0.0, 1.0, numeric::GaussLegendreRule(order));
  while (order < opts.max_order) {
    order *= 2;
    const double current =
        numeric::integrate_gauss(integrand, 0.0, 1.0, numeric::GaussLegendreRule(order));
    if (std::abs(current - previous) <= opts.rel_change * std::abs(current)) return current;
    previous = current;
  }
  throw numeric::QuadratureError("zeta_factor: Gauss rule did not settle by order " +
                                 std::to_string(opts.max_order));
}

/// Root-mean-square projected kick, sqrt(<dp^2>), with <u^2> = 1/3.
inline double kick_rms(const KickLaw& law, double rel_tol = 1e-12) {
  const MoleculeParams& mol = law.molecule();
  const double second = reduced_rate_moment(mol, 2, rel_tol) / reduced_rate_moment(mol, 0, rel_tol);
  return thermal_momentum(law.temperature()) * std::sqrt(second / 3.0);
}

template <class Rng>
double sample_kick(const KickLaw& law, Rng& rng) {
  const double omega = sample_frequency(law.spectrum, rng);
  const double cosine = 2.0 * uniform01(rng) - 1.0;
  return constants::hbar * omega / constants::speed_of_light * cosine;
}

template <class Rng>
KickTrajectory sample_trajectory(const KickLaw& law, double flight_time, Rng& rng) {
  if (!(flight_time >= 0.0)) throw std::invalid_argument("sample_trajectory: t must be >= 0");
  KickTrajectory traj;
  traj.flight_time = flight_time;
  const auto n = poisson(rng, law.rate * flight_time);
  traj.event_times.reserve(n);
  traj.jumps.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) traj.event_times.push_back(flight_time * uniform01(rng));
  std::sort(traj.event_times.begin(), traj.event_times.end());
  for (std::uint64_t k = 0; k < n; ++k) traj.jumps.push_back(sample_kick(law, rng));
  return traj;
}

}  // namespace mesodec
