// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "mesodec/constants.hpp"
#include "mesodec/kicks.hpp"
#include "mesodec/random.hpp"
#include "oracles.hpp"

using namespace mesodec;
namespace k = mesodec::constants;

namespace {

KickLaw law_for(MoleculeParams mol, double temperature) {
  return KickLaw::make(EmissionSpectrum::make(mol, temperature, 1e-13));
}

MoleculeParams infinite_modes(MoleculeParams mol) {
  mol.n_modes = std::numeric_limits<double>::infinity();
  return mol;
}

// Without the mode correction the spectral average of sinc has a closed form:
// f = sin((l+2) theta) / ((l+2) X (1 + X^2)^((l+2)/2)), theta = atan X.
double f_closed_form(int ell, double temperature, double x) {
  const double big_x = x * k::boltzmann * temperature / (k::hbar * k::speed_of_light);
  if (big_x == 0.0) return 1.0;
  const int n = ell + 2;
  return std::sin(n * std::atan(big_x)) / (n * big_x * std::pow(1.0 + big_x * big_x, 0.5 * n));
}

// Without the mode correction W has a closed form through the regularised
// upper incomplete gamma function Q(l+2, a) = e^-a sum_{j<l+2} a^j / j!.
double w_closed_form(int ell, double temperature, double dp) {
  const double p_t = k::boltzmann * temperature / k::speed_of_light;
  const double a = std::abs(dp) / p_t;
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < ell + 2; ++j) {
    term *= a / j;
    sum += term;
  }
  return std::exp(-a) * sum / (2.0 * p_t * (ell + 2));
}

}  // namespace

TEST(KickLaw, RequiresPositiveRate) {
  EXPECT_THROW(KickLaw::make(EmissionSpectrum{presets::c70(), 1000.0, 0.0}), std::invalid_argument);
  EXPECT_NO_THROW(law_for(presets::c70(), 1000.0));
}

TEST(WDensity, SymmetricAndNonIncreasing) {
  const auto law = law_for(presets::c70(), 2500.0);
  const double p_t = thermal_momentum(2500.0);
  double previous = std::numeric_limits<double>::infinity();
  for (double a = 0.0; a < 40.0; a += 0.37) {
    const double w = w_density(law, a * p_t);
    EXPECT_EQ(w, w_density(law, -a * p_t));
    EXPECT_LE(w, previous);
    EXPECT_GE(w, 0.0);
    previous = w;
  }
}

TEST(WDensity, MatchesIncompleteGammaWithoutModeCorrection) {
  const auto mol = infinite_modes(presets::c60());
  const auto law = law_for(mol, 1800.0);
  const double p_t = thermal_momentum(1800.0);
  for (double a : {0.0, 0.1, 1.0, 5.0, 12.0, 30.0}) {
    EXPECT_NEAR(w_density(law, a * p_t) / w_closed_form(4, 1800.0, a * p_t), 1.0, 1e-9) << a;
  }
}

TEST(WDensity, NormalisedOverWideWindow) {
  const auto law = law_for(presets::c70(), 2000.0);
  const double p_t = thermal_momentum(2000.0);
  const double reach = reduced_cutoff(law.molecule()) * p_t;
  const double total = 2.0 * oracle::simpson([&](double dp) { return w_density(law, dp, 1e-12); },
                                             0.0, reach, 4000);
  EXPECT_NEAR(total, 1.0, 1e-8);
}

TEST(CharacteristicFunction, UnitAtOriginAndBounded) {
  const auto law = law_for(presets::c70(), 2500.0);
  EXPECT_EQ(characteristic_function(law, 0.0), 1.0);
  for (double x = 1e-9; x < 1e-4; x *= 2.3) {
    EXPECT_LE(std::abs(characteristic_function(law, x)), 1.0);
    EXPECT_NEAR(characteristic_function(law, x) + one_minus_characteristic(law, x), 1.0, 1e-12);
  }
}

TEST(CharacteristicFunction, MatchesClosedFormWithoutModeCorrection) {
  const auto mol = infinite_modes(presets::c70());
  for (double temperature : {800.0, 2500.0}) {
    const auto law = law_for(mol, temperature);
    for (double x : {1e-8, 1e-7, 1e-6, 1e-5}) {
      EXPECT_NEAR(characteristic_function(law, x), f_closed_form(4, temperature, x), 1e-10)
          << temperature << " " << x;
    }
  }
}

TEST(CharacteristicFunction, MatchesSampledSincAverage) {
  const auto law = law_for(presets::c70(), 2500.0);
  const double x = 1e-6;
  PhiloxStream rng(21);
  std::vector<double> s(1'000'000);
  for (auto& v : s) v = numeric::sinc(sample_frequency(law.spectrum, rng) * x / k::speed_of_light);
  const auto m = oracle::moments(s);
  EXPECT_NEAR(characteristic_function(law, x), m.mean, 3.0 * m.std_error);
}

TEST(CharacteristicFunction, DecaysAtLargeSeparation) {
  const auto law = law_for(presets::c70(), 2000.0);
  const double d_typ = k::hbar * k::speed_of_light / (k::boltzmann * 2000.0);
  double previous = 1.0;
  for (double scale : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    const double f = std::abs(characteristic_function(law, scale * d_typ));
    EXPECT_LT(f, previous) << scale;
    previous = f;
  }
  EXPECT_LT(std::abs(characteristic_function(law, 10.0 * d_typ)), 1e-3);
}

TEST(Zeta, ZeroAtOriginNonNegativeAndNonDecreasing) {
  const auto law = law_for(presets::c70(), 2500.0);
  EXPECT_EQ(zeta_factor(law, 0.0), 0.0);
  double previous = 0.0;
  for (double d = 1e-9; d <= 1e-5; d *= 1.8) {
    const double z = zeta_factor(law, d);
    EXPECT_GE(z, 0.0);
    EXPECT_LE(z, 2.0);
    EXPECT_GE(z, previous) << d;
    previous = z;
  }
  EXPECT_THROW(zeta_factor(law, -1e-6), std::invalid_argument);
}

TEST(Zeta, MatchesClosedFormOracleWithoutModeCorrection) {
  const auto mol = infinite_modes(presets::c60());
  const auto law = law_for(mol, 2000.0);
  for (double d : {2e-8, 3e-7, 1e-6}) {
    const double expected =
        oracle::simpson([&](double s) { return 1.0 - f_closed_form(4, 2000.0, s * d); }, 0.0, 1.0, 20000);
    EXPECT_NEAR(zeta_factor(law, d) / expected, 1.0, 1e-9) << d;
  }
}

TEST(Zeta, MatchesSampledKickAverage) {
  const auto law = law_for(presets::c70(), 2500.0);
  const double d = 1e-6;
  PhiloxStream rng(22);
  std::vector<double> s(1'000'000);
  for (auto& v : s) v = numeric::one_minus_sinc(d * sample_kick(law, rng) / k::hbar);
  const auto m = oracle::moments(s);
  EXPECT_NEAR(zeta_factor(law, d), m.mean, 3.0 * m.std_error);
}

TEST(SampleKick, SignBalanceAndMeanMagnitude) {
  const auto law = law_for(presets::c70(), 2500.0);
  PhiloxStream rng(23);
  const int n = 1'000'000;
  std::vector<double> sign(n);
  std::vector<double> magnitude(n);
  for (int i = 0; i < n; ++i) {
    const double dp = sample_kick(law, rng);
    sign[i] = dp > 0.0 ? 1.0 : (dp < 0.0 ? -1.0 : 0.0);
    magnitude[i] = std::abs(dp);
  }
  const auto s = oracle::moments(sign);
  EXPECT_NEAR(s.mean, 0.0, 3.0 * s.std_error);

  // <|dp|> = hbar <omega> / (2c) with <omega> = w_T * M1 / M0.
  const auto& mol = law.molecule();
  const double mean_omega = thermal_frequency(2500.0) * reduced_rate_moment(mol, 1) / reduced_rate_moment(mol, 0);
  const auto m = oracle::moments(magnitude);
  EXPECT_NEAR(m.mean, k::hbar * mean_omega / (2.0 * k::speed_of_light), 3.0 * m.std_error);
}

TEST(SampleKick, KolmogorovSmirnovAgainstJumpDensity) {
  const auto law = law_for(presets::c60(), 2000.0);
  const double p_t = thermal_momentum(2000.0);
  const oracle::TabulatedCdf cdf([&](double dp) { return w_density(law, dp); }, -40.0 * p_t,
                                 40.0 * p_t, 4001);
  PhiloxStream rng(24);
  std::vector<double> dp(200000);
  for (auto& v : dp) v = sample_kick(law, rng);
  EXPECT_LT(oracle::ks_statistic(dp, cdf), oracle::ks_critical_1pct(dp.size()));
}

TEST(KickRms, MatchesSampledSecondMoment) {
  const auto law = law_for(presets::c70(), 2200.0);
  PhiloxStream rng(25);
  std::vector<double> sq(400000);
  for (auto& v : sq) {
    const double dp = sample_kick(law, rng);
    v = dp * dp;
  }
  const auto m = oracle::moments(sq);
  const double rms = kick_rms(law);
  EXPECT_NEAR(rms * rms, m.mean, 4.0 * m.std_error);
}

TEST(SampleTrajectory, EmptyAtZeroTime) {
  const auto law = law_for(presets::c70(), 2500.0);
  PhiloxStream rng(26);
  const auto traj = sample_trajectory(law, 0.0, rng);
  EXPECT_EQ(traj.size(), 0u);
  EXPECT_EQ(traj.jumps.size(), 0u);
  EXPECT_THROW(sample_trajectory(law, -1.0, rng), std::invalid_argument);
}

TEST(SampleTrajectory, CountMeanAndUniformTimes) {
  const auto law = law_for(presets::c70(), 2500.0);
  const double t = 2e-3;
  PhiloxStream rng(27);
  const int n = 100000;
  std::vector<double> counts(n);
  std::vector<double> times;
  for (int i = 0; i < n; ++i) {
    const auto traj = sample_trajectory(law, t, rng);
    ASSERT_EQ(traj.event_times.size(), traj.jumps.size());
    for (std::size_t j = 0; j < traj.size(); ++j) {
      ASSERT_GE(traj.event_times[j], 0.0);
      ASSERT_LE(traj.event_times[j], t);
      if (j > 0) {
        ASSERT_LE(traj.event_times[j - 1], traj.event_times[j]);
      }
    }
    counts[i] = static_cast<double>(traj.size());
    if (times.size() < 200000) {
      for (double s : traj.event_times) times.push_back(s / t);
    }
  }
  const auto m = oracle::moments(counts);
  EXPECT_NEAR(m.mean, law.rate * t, 3.0 * m.std_error);
  EXPECT_LT(oracle::ks_statistic(times, [](double u) { return std::clamp(u, 0.0, 1.0); }),
            oracle::ks_critical_1pct(times.size()));
}

TEST(SampleTrajectory, DeterministicGivenSeed) {
  const auto law = law_for(presets::c70(), 2500.0);
  PhiloxStream a(5, 9);
  PhiloxStream b(5, 9);
  for (int i = 0; i < 50; ++i) {
    const auto x = sample_trajectory(law, 5e-3, a);
    const auto y = sample_trajectory(law, 5e-3, b);
    EXPECT_EQ(x.event_times, y.event_times);
    EXPECT_EQ(x.jumps, y.jumps);
  }
}
