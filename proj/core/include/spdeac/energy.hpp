// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "spdeac/dealias.hpp"
#include "spdeac/grid.hpp"

namespace spdeac {

/// Double-well derivative f(x) = x^3 - x and potential F(x) = (x^2 - 1)^2 / 4.
double double_well_f(double x) noexcept;
double double_well_df(double x) noexcept;
double double_well_potential(double x) noexcept;

/// Pointwise f(u), evaluated on the 2n grid and truncated when `dealias` is set.
ScalarField nonlinearity_f(const ScalarField& u, bool dealias = true);

struct EnergyReport {
  double energy = 0.0;          ///< dirichlet_part + potential_part
  double dirichlet_part = 0.0;  ///< (1/2) ||grad u||^2
  double potential_part = 0.0;  ///< integral of F(u)
};

/// Helmholtz energy. The potential is integrated by the trapezoid rule on the same grid the
/// nonlinearity uses, which keeps energy_gradient its exact derivative.
EnergyReport energy(const ScalarField& u, bool dealias = true);
EnergyReport energy(const SpectralCoeffs& u, bool dealias = true);

/// DE(u) = -Laplacian(u) + f(u).
ScalarField energy_gradient(const ScalarField& u, bool dealias = true);
SpectralCoeffs energy_gradient(const SpectralCoeffs& u, bool dealias = true);

/// Spectral-space evaluation of the shifted cubic N_s(v) = f(v + s) - f(s), expanded as
/// f(v) + 3 v^2 s + 3 v s^2, and of its Jacobian. s = 0 gives f itself.
class CubicNonlinearity {
 public:
  CubicNonlinearity(GridSpec grid, bool dealias);

  const EvaluationGrid& evaluation() const noexcept { return eval_; }

  /// Installs the frozen shift field (coefficients on the coarse grid).
  void set_shift(const SpectralCoeffs& shift);
  void clear_shift() noexcept { shift_.clear(); }
  bool has_shift() const noexcept { return !shift_.empty(); }

  /// N_s(v). When `jacobian_coefficient` is non-null it receives 3 (v + s)^2 - 1 at the
  /// evaluation nodes.
  SpectralCoeffs evaluate(const SpectralCoeffs& v,
                          std::vector<double>* jacobian_coefficient = nullptr) const;

  /// P[c * h] for a coefficient field c given at evaluation nodes.
  SpectralCoeffs multiply(std::span<const double> coefficient, const SpectralCoeffs& h) const;

 private:
  EvaluationGrid eval_;
  std::vector<double> shift_;  // at evaluation nodes
};

}  // namespace spdeac
