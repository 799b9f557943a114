// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mesodec/constants.hpp"
#include "mesodec/decoherence.hpp"
#include "mesodec/kicks.hpp"
#include "mesodec/montecarlo.hpp"
#include "mesodec/numeric/quadrature.hpp"
#include "mesodec/numeric/special.hpp"
#include "mesodec/parallel.hpp"
#include "mesodec/random.hpp"
#include "mesodec/spectrum.hpp"
#include "mesodec/version.hpp"
#include "mesodec/visibility.hpp"
