// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace mesodec {
inline constexpr const char* kVersion = "0.1.0";
}
