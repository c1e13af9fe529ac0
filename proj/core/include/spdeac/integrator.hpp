// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spdeac/energy.hpp"
#include "spdeac/grid.hpp"
#include "spdeac/noise.hpp"
#include "spdeac/resolvent.hpp"

namespace spdeac {

enum class SchemeVariant {
  Implicit,             ///< u_m = T_tau(u_{m-1} + Phi(u_{m-1}) Delta_m W)
  TransformedAdditive,  ///< march y_m = u_m - Phi W(t_m) for additive noise
};

enum class RecordMode { FinalOnly, EveryStep };

std::string to_string(SchemeVariant v);

struct SchemeConfig {
  double tau = 1.0 / 32.0;
  std::size_t num_steps = 32;
  SchemeVariant variant = SchemeVariant::Implicit;
  SolverConfig solver{};
  RecordMode record = RecordMode::FinalOnly;

  double horizon() const noexcept { return tau * static_cast<double>(num_steps); }
  /// tau < 1/2 always; tau < 1/4 as well when `for_energy_ledger`.
  void validate(bool for_energy_ledger = false) const;
};

/// Diagnostics of one trajectory. Index m = 0..M; entry 0 describes u_0.
struct TrajectoryRecord {
  double tau = 0.0;
  std::vector<ScalarField> states;  ///< every state (EveryStep) or u_0 and u_M (FinalOnly)
  std::vector<EnergyReport> energies;
  std::vector<double> dissipation;  ///< ||DE(u_m)||^2_{L^2}
  std::vector<double> l2_norms;
  std::size_t increments_consumed = 0;

  std::size_t num_steps() const noexcept { return energies.empty() ? 0 : energies.size() - 1; }
  const ScalarField& final_state() const { return states.back(); }
};

/// One implicit step: T_tau(u_prev + Phi(u_prev) dW).
ScalarField step_implicit(const ScalarField& u_prev, std::span<const double> dW,
                          const NoiseSpec& spec, double tau, const SolverConfig& solver = {});

/// One step of the transformed scheme: solves
///   y + tau A y + tau [f(y) + 3 y^2 w + 3 y w^2] = y_prev + tau [Laplacian(w) - f(w)]
/// with w = Phi W(t_m) the accumulated noise field.
ScalarField step_transformed_additive(const ScalarField& y_prev, const ScalarField& w_tm, double tau,
                                      const SolverConfig& solver = {});

/// Reusable stepping machinery for one (grid, spec, tau, solver) combination.
class Stepper {
 public:
  Stepper(GridSpec grid, const NoiseSpec& spec, double tau, const SolverConfig& solver);

  const DiffusionOperator& diffusion() const noexcept { return diffusion_; }
  ScalarField implicit(const ScalarField& u_prev, std::span<const double> dW) const;
  ScalarField transformed(const ScalarField& y_prev, const SpectralCoeffs& w_tm);

 private:
  GridSpec grid_;
  double tau_;
  DiffusionOperator diffusion_;
  NonlinearResolvent plain_;
  NonlinearResolvent shifted_;
  CubicNonlinearity cubic_;
};

/// Called with (m, u_m) for m = 0..M.
using StateObserver = std::function<void(std::size_t, const ScalarField&)>;

/// Marches M = cfg.num_steps steps and reports every state; no diagnostics. The path step must
/// equal cfg.tau or divide it by a power of two (it is then coarsened). Errors carry the step.
ScalarField march(const SchemeConfig& cfg, const ScalarField& u0, const NoiseSpec& spec,
                  const WienerPath& path, const StateObserver& observer = {});

/// march plus energy and dissipation at every step.
TrajectoryRecord run(const SchemeConfig& cfg, const ScalarField& u0, const NoiseSpec& spec,
                     const WienerPath& path);

enum class LedgerMode {
  Deterministic,  ///< assert the inequality at every step
  Statistical,    ///< only collect the quantities
};

struct LedgerReport {
  double initial_energy = 0.0;
  double max_energy = 0.0;
  double dissipation_sum = 0.0;  ///< tau sum_{l=1}^{M} ||DE(u_l)||^2
  double min_margin = 0.0;       ///< min_m [E(u_0) - E(u_m) - tau sum_{l<=m} ||DE(u_l)||^2]
  bool strictly_decreasing = true;
};

/// Discrete energy inequality E(u_m) + tau sum_{l<=m} ||DE(u_l)||^2 <= E(u_0), slack
/// 1e-8 (1 + |E(u_0)|). Deterministic mode throws InequalityViolated on the first bad step.
/// strictly_decreasing reports E(u_m) < E(u_{m-1}) at every step whose state is not already
/// within `equilibrium_tol` of an equilibrium (||DE|| <= equilibrium_tol).
LedgerReport energy_ledger_check(const TrajectoryRecord& traj, double tau,
                                 LedgerMode mode = LedgerMode::Deterministic,
                                 double equilibrium_tol = 1e-10);

/// CSV with header step,t,energy,dirichlet_part,potential_part,dissipation,l2_norm.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& traj);

enum class InitialPreset {
  Sin,           ///< sum_i sin(x_i)
  TwoInterface,  ///< tanh(2 sin x_1): two smooth interfaces at x_1 = 0 and pi
  Constant,
};

InitialPreset parse_initial_preset(const std::string& name);
std::string to_string(InitialPreset p);
ScalarField initial_condition(const GridSpec& grid, InitialPreset preset, double value = 1.0);

}  // namespace spdeac
