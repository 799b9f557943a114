// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "mesodec/decoherence.hpp"

using namespace mesodec;

namespace {

double visibility_at(double temperature, double d, double t) {
  ExperimentConfig cfg;
  cfg.molecule = presets::c70();
  cfg.temperature = temperature;
  cfg.slit_separation = d;
  cfg.flight_time = t;
  return visibility_closed_form(cfg).visibility;
}

AxisSpec axis(SweepAxis a, double lo, double hi, int n, bool log = false) {
  AxisSpec s;
  s.axis = a;
  s.min = lo;
  s.max = hi;
  s.count = n;
  s.log = log;
  return s;
}

}  // namespace

TEST(Tdec, RootHasHalfVisibility) {
  TdecOptions opts;
  opts.t_hi = 4000.0;
  opts.tol_T = 1.0;
  const auto r = decoherence_temperature(presets::c70(), 1e-6, 10e-3, opts);
  ASSERT_EQ(r.status, RootStatus::converged);
  EXPECT_GT(r.temperature, 0.0);
  EXPECT_LT(r.temperature, 3000.0);
  const double v = visibility_at(r.temperature, 1e-6, 10e-3);
  EXPECT_GE(v, 0.49);
  EXPECT_LE(v, 0.51);
  EXPECT_LE(r.upper - r.lower, 1.0);
}

TEST(Tdec, FineToleranceAndRefinedPoint) {
  const auto r = decoherence_temperature(presets::c70(), 1e-6, 10e-3);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(visibility_at(r.temperature, 1e-6, 10e-3), 0.5, 1e-3);
  EXPECT_LE(std::abs(r.h_root), std::abs(r.h_lower));
  EXPECT_LE(std::abs(r.h_root), std::abs(r.h_upper));
  EXPECT_LE(r.h_lower, 0.0);
  EXPECT_GE(r.h_upper, 0.0);
  EXPECT_LE(r.iterations, 50);
}

TEST(Tdec, DecreasesWithSeparationAndTime) {
  const auto mol = presets::c70();
  const double base = decoherence_temperature(mol, 1e-7, 5e-3).temperature;
  EXPECT_LT(decoherence_temperature(mol, 2e-7, 5e-3).temperature, base);
  EXPECT_LT(decoherence_temperature(mol, 1e-7, 10e-3).temperature, base);
  TdecOptions wide;
  wide.t_hi = 8000.0;
  EXPECT_GT(decoherence_temperature(mol, 0.02e-6, 10e-3, wide).temperature,
            decoherence_temperature(mol, 1e-6, 10e-3, wide).temperature);
}

TEST(Tdec, NoRootIsReportedNotThrown) {
  TdecOptions opts;
  opts.t_lo = 10.0;
  opts.t_hi = 500.0;
  const auto r = decoherence_temperature(presets::c70(), 1e-6, 10e-3, opts);
  EXPECT_EQ(r.status, RootStatus::no_root);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(std::isnan(r.temperature));
  EXPECT_EQ(to_string(r.status), "no_root");
}

TEST(Bisection, NonMonotoneFunctionIsReported) {
  TdecOptions opts;
  opts.t_lo = 1.0;
  opts.t_hi = 8.0;
  // Rises, dips between probes 3 and 4, then rises through zero.
  const auto r = bisect_increasing([](double x) { return x < 4.5 ? x - 5.0 : x - 7.0; }, opts);
  EXPECT_EQ(r.status, RootStatus::non_monotone);
  EXPECT_EQ(to_string(r.status), "non_monotone");
}

TEST(Bisection, FindsRootOfIncreasingFunction) {
  TdecOptions opts;
  opts.t_lo = 1.0;
  opts.t_hi = 10.0;
  opts.tol_T = 1e-9;
  const auto r = bisect_increasing([](double x) { return x * x - 2.0; }, opts);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r.temperature, std::sqrt(2.0), 1e-9);
  EXPECT_LE(r.upper - r.lower, 1e-9);
}

TEST(Bisection, FlatFunctionWithoutSignChangeHasNoRoot) {
  TdecOptions opts;
  const auto r = bisect_increasing([](double) { return 1.0; }, opts);
  EXPECT_EQ(r.status, RootStatus::no_root);
}

TEST(Tdec, OptionValidation) {
  TdecOptions bad;
  bad.t_lo = 100.0;
  bad.t_hi = 50.0;
  EXPECT_THROW(decoherence_temperature(presets::c70(), 1e-6, 1e-3, bad), std::invalid_argument);
  EXPECT_THROW(decoherence_temperature(presets::c70(), 0.0, 1e-3), std::invalid_argument);
  TdecOptions level;
  level.level = 1.0;
  EXPECT_THROW(decoherence_temperature(presets::c70(), 1e-6, 1e-3, level), std::invalid_argument);
}

TEST(AxisSpec, LinearAndLogValues) {
  const auto lin = axis(SweepAxis::temperature, 0.0, 3000.0, 61).values();
  EXPECT_EQ(lin.front(), 0.0);
  EXPECT_EQ(lin.back(), 3000.0);
  EXPECT_NEAR(lin[1], 50.0, 1e-12);
  const auto lg = axis(SweepAxis::separation, 1e-8, 1e-6, 3, true).values();
  EXPECT_NEAR(lg[1], 1e-7, 1e-20);
  EXPECT_THROW(axis(SweepAxis::separation, 0.0, 1e-6, 3, true).validate(), std::invalid_argument);
  EXPECT_THROW(axis(SweepAxis::time, 1.0, 1.0, 3).validate(), std::invalid_argument);
  EXPECT_THROW(axis(SweepAxis::time, 0.0, 1.0, 1).validate(), std::invalid_argument);
}

TEST(VisibilitySurface, BoundedAndMonotoneAlongRows) {
  GridSpec grid;
  grid.axis1 = axis(SweepAxis::temperature, 0.0, 3000.0, 16);
  grid.axis2 = axis(SweepAxis::time, 3e-3, 20e-3, 9);
  grid.fixed.slit_separation = 1e-6;
  const auto s = visibility_surface(presets::c70(), grid);
  EXPECT_EQ(s.failures, 0);
  ASSERT_EQ(s.values.size(), 16u * 9u);
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      EXPECT_GE(s.at(i, j), 0.0);
      EXPECT_LE(s.at(i, j), 1.0);
      if (j > 0) {
        EXPECT_LE(s.at(i, j), s.at(i, j - 1));
      }
    }
  }
  for (std::size_t j = 0; j < 9; ++j) EXPECT_EQ(s.at(0, j), 1.0);
  EXPECT_NEAR(s.at(10, 4), visibility_at(s.axis1_values[10], 1e-6, s.axis2_values[4]), 1e-12);
}

TEST(VisibilitySurface, IndependentOfThreadCount) {
  GridSpec grid;
  grid.axis1 = axis(SweepAxis::temperature, 0.0, 4000.0, 12);
  grid.axis2 = axis(SweepAxis::separation, 1e-8, 1e-6, 7, true);
  grid.fixed.flight_time = 10e-3;
  SweepOptions one;
  SweepOptions many;
  many.threads = 8;
  const auto a = visibility_surface(presets::c70(), grid, one);
  const auto b = visibility_surface(presets::c70(), grid, many);
  EXPECT_EQ(a.values, b.values);
}

TEST(VisibilitySurface, SharpTransition) {
  // Temperature width of the 0.1 < V < 0.9 band against the V = 1/2 point.
  GridSpec grid;
  grid.axis1 = axis(SweepAxis::temperature, 10.0, 4000.0, 800);
  grid.axis2 = axis(SweepAxis::time, 9e-3, 10e-3, 2);
  grid.fixed.slit_separation = 1e-6;
  const auto s = visibility_surface(presets::c70(), grid);
  double t90 = 0.0;
  double t10 = 0.0;
  for (std::size_t i = 0; i < s.axis1_values.size(); ++i) {
    if (t90 == 0.0 && s.at(i, 1) < 0.9) t90 = s.axis1_values[i];
    if (t10 == 0.0 && s.at(i, 1) < 0.1) t10 = s.axis1_values[i];
  }
  const double tdec = decoherence_temperature(presets::c70(), 1e-6, 10e-3).temperature;
  ASSERT_GT(t90, 0.0);
  ASSERT_GT(t10, t90);
  EXPECT_LT((t10 - t90) / tdec, 0.5);
}

TEST(VisibilitySurface, RejectsDuplicateAxes) {
  GridSpec grid;
  grid.axis1 = axis(SweepAxis::time, 1e-3, 2e-3, 2);
  grid.axis2 = axis(SweepAxis::time, 1e-3, 2e-3, 2);
  EXPECT_THROW(visibility_surface(presets::c70(), grid), std::invalid_argument);
}

TEST(TdecSurface, MonotoneAndConsistentWithDirectSolve) {
  GridSpec grid;
  grid.axis1 = axis(SweepAxis::separation, 0.2e-6, 1e-6, 5);
  grid.axis2 = axis(SweepAxis::time, 2e-3, 10e-3, 5);
  TdecOptions tdec;
  tdec.t_hi = 8000.0;
  const auto s = tdec_surface(presets::c70(), grid, tdec);
  EXPECT_EQ(s.failures, 0);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_GT(s.at(i, j), 0.0);
      if (i > 0) {
        EXPECT_LE(s.at(i, j), s.at(i - 1, j));
      }
      if (j > 0) {
        EXPECT_LE(s.at(i, j), s.at(i, j - 1));
      }
    }
  }
  const auto direct = decoherence_temperature(presets::c70(), 1e-6, 10e-3, tdec);
  EXPECT_EQ(s.at(4, 4), direct.temperature);
}

TEST(TdecSurface, NoRootNodesCarrySentinel) {
  GridSpec grid;
  grid.axis1 = axis(SweepAxis::separation, 0.01e-6, 1e-6, 2);
  grid.axis2 = axis(SweepAxis::time, 1e-3, 10e-3, 2);
  TdecOptions tdec;
  tdec.t_hi = 3000.0;
  const auto s = tdec_surface(presets::c70(), grid, tdec);
  EXPECT_GT(s.failures, 0);
  EXPECT_TRUE(std::isnan(s.at(0, 0)));
  EXPECT_FALSE(std::isnan(s.at(1, 1)));
  EXPECT_EQ(s.messages.front(), "no_root");
}

TEST(TdecSurface, RequiresSeparationAndTimeAxes) {
  GridSpec grid;
  grid.axis1 = axis(SweepAxis::temperature, 10.0, 20.0, 2);
  grid.axis2 = axis(SweepAxis::time, 1e-3, 2e-3, 2);
  EXPECT_THROW(tdec_surface(presets::c70(), grid), std::invalid_argument);
}
