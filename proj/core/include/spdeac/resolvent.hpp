// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "spdeac/energy.hpp"
#include "spdeac/grid.hpp"

namespace spdeac {

enum class SolverMethod {
  FixedPoint,  ///< v <- S_tau(g - tau N(v)), switching to Newton if it stalls
  Newton,      ///< Newton with preconditioned conjugate-gradient inner solves
};

struct SolverConfig {
  double tol_residual = 1e-10;  ///< absolute L^2 residual
  int max_iter = 100;
  SolverMethod method = SolverMethod::FixedPoint;
  bool dealias = true;

  /// Throws InvalidArgument on a nonpositive tolerance or iteration budget.
  void validate() const;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
  bool used_newton = false;
};

/// The nonlinear resolvent on one grid: solves
///   v + tau A v + tau [f(v + s) - f(s)] = rhs
/// for a fixed shift field s (s = 0 gives T_tau). Keeps the evaluation tables between solves;
/// not safe for concurrent use of one instance.
class NonlinearResolvent {
 public:
  NonlinearResolvent(GridSpec grid, double tau, SolverConfig cfg);

  const GridSpec& grid() const noexcept { return grid_; }
  double tau() const noexcept { return tau_; }
  const SolverConfig& config() const noexcept { return cfg_; }

  void set_shift(const SpectralCoeffs& shift) { cubic_.set_shift(shift); }
  void clear_shift() noexcept { cubic_.clear_shift(); }

  /// Throws NoConvergence when the budget runs out.
  SpectralCoeffs solve(const SpectralCoeffs& rhs, SolveStats* stats = nullptr) const;

  /// L^2 norm of v + tau A v + tau N_s(v) - rhs.
  double residual(const SpectralCoeffs& v, const SpectralCoeffs& rhs) const;

  /// Solves (Id + tau A + tau N_s'(v)) w = h by S_tau-preconditioned conjugate gradients
  /// to an absolute residual of `tol`.
  SpectralCoeffs solve_linearized(const SpectralCoeffs& v, const SpectralCoeffs& h, double tol,
                                  int max_iter, int* iterations = nullptr) const;

 private:
  SpectralCoeffs residual_vector(const SpectralCoeffs& v, const SpectralCoeffs& n_of_v,
                                 const SpectralCoeffs& rhs) const;
  SpectralCoeffs conjugate_gradient(std::span<const double> coefficient, const SpectralCoeffs& b,
                                    double tol, int max_iter, int& iterations,
                                    double& final_residual) const;
  SpectralCoeffs newton(SpectralCoeffs v, const SpectralCoeffs& rhs, int budget,
                        SolveStats& stats) const;

  GridSpec grid_;
  double tau_;
  SolverConfig cfg_;
  CubicNonlinearity cubic_;
  std::vector<double> multiplier_;  // 1 + tau |k|^2
};

/// T_tau g: the solution v of v + tau A v + tau f(v) = g. Requires 0 < tau < 1/2.
ScalarField solve_t_tau(const ScalarField& g, double tau, const SolverConfig& cfg = {},
                        SolveStats* stats = nullptr);

/// ||v + tau A v + tau f(v) - g||_{L^2}.
double residual(const ScalarField& v, const ScalarField& g, double tau, bool dealias = true);

/// DT_tau(g) h = (Id + tau A + tau f'(T_tau g))^{-1} h. Requires 0 < tau < 1/2.
ScalarField apply_dt_tau(const ScalarField& g, const ScalarField& h, double tau,
                         const SolverConfig& cfg = {});

/// Throws InvalidArgument unless 0 < tau < 1/2.
void require_resolvent_tau(double tau);

}  // namespace spdeac
