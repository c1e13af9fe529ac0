// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spdeac/grid.hpp"

namespace spdeac {

enum class NoiseVariant {
  Additive,   ///< Phi e_k = mu_k psi_k
  Nemytskii,  ///< Phi(u) e_k = mu_k p(u(x)) psi_k(x)
  Affine,     ///< Phi(u) e_k = alpha_k u + beta_k, alpha_k = mu_k psi_k, beta_k = mu_k psi~_k
};

/// Scalar profile p of a Nemytskii diffusion.
enum class NemytskiiProfile {
  Sin,           ///< sin(xi): bounded, |p'| <= 1
  Rational,      ///< 2 xi / (1 + xi^2): bounded by 1, |p'| <= 2
  LinearGrowth,  ///< sqrt(1 + xi^2): linear growth, |p'| <= 1
};

/// Parametrisation of the diffusion coefficient Phi over a truncated real trigonometric basis.
///
/// Noise index k (0-based) selects psi_k from the list cos(kappa_1.x), sin(kappa_1.x),
/// cos(kappa_2.x), ... where kappa_j runs over nonzero resolved wavevectors of one half space
/// ordered by |kappa|^2 and then lexicographically; psi~_k is the sin/cos partner of psi_k.
/// The amplitude is mu_k = amplitude * (1 + |kappa|^2)^{-decay}.
struct NoiseSpec {
  NoiseVariant variant = NoiseVariant::Additive;
  int num_modes = 0;  ///< K; 0 selects the default truncation
  double decay = 2.0;
  double amplitude = 0.0;
  NemytskiiProfile profile = NemytskiiProfile::Sin;
};

std::string to_string(NoiseVariant v);
std::string to_string(NemytskiiProfile p);

/// Number of basis functions available on the grid (two per half-space wavevector).
int max_noise_modes(const GridSpec& grid);
/// Smallest K covering every mode with (1 + |kappa|^2)^{-decay} >= 1e-8, capped by the grid.
int default_noise_modes(const GridSpec& grid, double decay);
/// K after resolving the default; throws InvalidArgument if it exceeds the grid.
int resolved_noise_modes(const NoiseSpec& spec, const GridSpec& grid);

/// sum_k mu_k^2 (1 + |kappa_k|^2)^3, the W^{3,2} Hilbert-Schmidt norm squared of an additive
/// Phi up to the basis normalisation constant. Finite for every truncation; reported so callers
/// can check the regularity hypothesis of the transformed additive scheme.
double additive_w32_weight(const NoiseSpec& spec, const GridSpec& grid);

/// Constants c with ||Phi(u)||_{HS} <= growth * (1 + ||u||) and
/// ||Phi(u) - Phi(v)||_{HS} <= lipschitz * ||u - v|| for all fields.
struct NoiseBounds {
  double growth = 0.0;
  double lipschitz = 0.0;
};
NoiseBounds noise_bounds(const NoiseSpec& spec, const GridSpec& grid);

/// Precomputed basis tables for one (spec, grid) pair. Immutable after construction.
class DiffusionOperator {
 public:
  DiffusionOperator(NoiseSpec spec, GridSpec grid);

  const NoiseSpec& spec() const noexcept { return spec_; }
  const GridSpec& grid() const noexcept { return grid_; }
  int num_modes() const noexcept { return num_modes_; }
  std::span<const double> amplitudes() const noexcept { return mu_; }
  const std::array<int, 3>& wavevector(int k) const { return kappa_[static_cast<std::size_t>(k)]; }
  /// psi_k at the nodes.
  std::span<const double> basis(int k) const;
  /// psi~_k at the nodes.
  std::span<const double> partner(int k) const;

  /// sum_k Phi(u) e_k dW_k.
  ScalarField apply(const ScalarField& u, std::span<const double> dW) const;
  /// Phi e_k for additive spec; the u argument of apply is irrelevant there.
  ScalarField additive_field(std::span<const double> w) const;
  /// (sum_k ||Phi(u) e_k||^2_{L^2})^{1/2}.
  double hs_norm_l2(const ScalarField& u) const;
  /// ||Phi(u) - Phi(v)||_{HS}.
  double hs_distance_l2(const ScalarField& u, const ScalarField& v) const;

 private:
  ScalarField column(const ScalarField& u, int k) const;

  NoiseSpec spec_;
  GridSpec grid_;
  int num_modes_;
  std::vector<double> mu_;
  std::vector<std::array<int, 3>> kappa_;
  std::vector<double> basis_;    // num_modes x grid.size()
  std::vector<double> partner_;  // num_modes x grid.size()
};

ScalarField apply_diffusion(const NoiseSpec& spec, const ScalarField& u, std::span<const double> dW);
double hs_norm_l2(const NoiseSpec& spec, const ScalarField& u);

/// Brownian increments of K scalar Wiener processes on a uniform time grid.
///
/// Row m (0-based) holds Delta_{m+1} beta_k for k = 0..K-1.
class WienerPath {
 public:
  WienerPath(std::uint64_t seed, int num_modes, double tau, std::size_t num_steps,
             std::vector<double> increments);

  std::uint64_t seed() const noexcept { return seed_; }
  int num_modes() const noexcept { return num_modes_; }
  double tau() const noexcept { return tau_; }
  std::size_t num_steps() const noexcept { return num_steps_; }
  std::span<const double> increment(std::size_t step) const;
  std::span<const double> data() const noexcept { return increments_; }

  /// W(t_m) for every mode: sum of the first m increments (m = 0..num_steps).
  std::vector<double> value_at(std::size_t m) const;

  friend bool operator==(const WienerPath&, const WienerPath&) = default;

 private:
  std::uint64_t seed_;
  int num_modes_;
  double tau_;
  std::size_t num_steps_;
  std::vector<double> increments_;
};

/// Increment (m, k) is sqrt(tau) * Z(seed, k, m) with Z a counter-based standard normal.
WienerPath sample_path(std::uint64_t seed, int num_modes, double tau_fine, std::size_t num_steps);

/// Sums `factor` consecutive increments by repeated pairwise halving, so coarsening by 2^a
/// and then 2^b reproduces coarsening by 2^{a+b} bit for bit. Throws FactorMismatch.
WienerPath coarsen(const WienerPath& path, std::size_t factor);

/// Binary dump: u64 seed, u64 K, f64 tau, u64 steps, then steps*K f64 increments (row-major),
/// all in host byte order.
void write_path(std::ostream& os, const WienerPath& path);
WienerPath read_path(std::istream& is);

}  // namespace spdeac
