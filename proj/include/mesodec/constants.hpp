// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>

namespace mesodec::constants {

// CODATA 2018, SI units.
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double boltzmann = 1.380649e-23;       // J / K
inline constexpr double speed_of_light = 299792458.0;   // m / s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

inline constexpr double pi = std::numbers::pi;
inline constexpr double ln2 = std::numbers::ln2;

inline constexpr double nm2_to_m2 = 1e-18;

}  // namespace mesodec::constants
