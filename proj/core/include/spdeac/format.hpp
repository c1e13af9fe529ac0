// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace spdeac {

/// Shortest round-trip decimal form of x; byte-stable across runs.
std::string format_double(double x);

}  // namespace spdeac
