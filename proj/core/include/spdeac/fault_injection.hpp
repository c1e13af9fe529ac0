// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>

namespace spdeac {

/// Deliberate defects that self-test runs can switch on to prove their checks bite.
enum class Fault {
  None,
  FlipNonlinearitySign,  ///< f(u) evaluates to -(u^3 - u)
  ResolventOffByOne,     ///< S_tau uses |k|^2 + 1 instead of |k|^2
};

/// Process-wide; None outside self-test runs.
Fault active_fault() noexcept;
void set_fault(Fault fault) noexcept;

std::optional<Fault> parse_fault(std::string_view name);
std::string_view fault_name(Fault fault) noexcept;

/// Installs `fault` for the lifetime of the guard.
class ScopedFault {
 public:
  explicit ScopedFault(Fault fault) noexcept : previous_(active_fault()) { set_fault(fault); }
  ~ScopedFault() { set_fault(previous_); }
  ScopedFault(const ScopedFault&) = delete;
  ScopedFault& operator=(const ScopedFault&) = delete;

 private:
  Fault previous_;
};

}  // namespace spdeac
