// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/fault_injection.hpp"

#include <atomic>

namespace spdeac {

namespace {
std::atomic<Fault> g_fault{Fault::None};
}  // namespace

Fault active_fault() noexcept { return g_fault.load(std::memory_order_relaxed); }

void set_fault(Fault fault) noexcept { g_fault.store(fault, std::memory_order_relaxed); }

std::optional<Fault> parse_fault(std::string_view name) {
  if (name == "none") return Fault::None;
  if (name == "flip_f_sign") return Fault::FlipNonlinearitySign;
  if (name == "resolvent_off_by_one") return Fault::ResolventOffByOne;
  return std::nullopt;
}

std::string_view fault_name(Fault fault) noexcept {
  switch (fault) {
    case Fault::None:
      return "none";
    case Fault::FlipNonlinearitySign:
      return "flip_f_sign";
    case Fault::ResolventOffByOne:
      return "resolvent_off_by_one";
  }
  return "none";
}

}  // namespace spdeac
