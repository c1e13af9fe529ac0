// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace spdeac {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A pure function of (key, counter): no state is carried between calls, so any draw can
/// be reproduced or generated out of order.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit constexpr Philox4x32(Key key) noexcept : key_(key) {}
  explicit Philox4x32(std::uint64_t seed) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Counter operator()(Counter ctr) const noexcept;

 private:
  Key key_;
};

/// Uniform double in the open interval (0, 1) from 64 random bits.
double uniform_open01(std::uint64_t bits) noexcept;

/// Standard normal draw indexed by (seed, a, b); uses one Philox block and Box-Muller.
double counter_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept;

/// SplitMix64 finaliser, used to derive independent per-sample seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace spdeac
