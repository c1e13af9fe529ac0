// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/integrator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "spdeac/errors.hpp"
#include "spdeac/format.hpp"
#include "spdeac/spectral.hpp"

namespace spdeac {

std::string to_string(SchemeVariant v) {
  return v == SchemeVariant::Implicit ? "implicit" : "transformed_additive";
}

void SchemeConfig::validate(bool for_energy_ledger) const {
  if (!(tau > 0.0 && tau < 0.5)) {
    std::ostringstream os;
    os << "scheme.tau = " << tau << " violates the rule tau < 1/2 (and tau > 0)";
    throw InvalidArgument(os.str());
  }
  if (for_energy_ledger && !(tau < 0.25)) {
    std::ostringstream os;
    os << "scheme.tau = " << tau << " violates the energy-ledger rule tau < 1/4";
    throw InvalidArgument(os.str());
  }
  solver.validate();
}

// ---------------------------------------------------------------------------

Stepper::Stepper(GridSpec grid, const NoiseSpec& spec, double tau, const SolverConfig& solver)
    : grid_(grid), tau_(tau), diffusion_(spec, grid), plain_(grid, tau, solver),
      shifted_(grid, tau, solver), cubic_(grid, solver.dealias) {}

ScalarField Stepper::implicit(const ScalarField& u_prev, std::span<const double> dW) const {
  ScalarField g = u_prev;
  g += diffusion_.apply(u_prev, dW);
  return inverse_transform(plain_.solve(forward_transform(g)));
}

ScalarField Stepper::transformed(const ScalarField& y_prev, const SpectralCoeffs& w_tm) {
  const SpectralCoeffs f_of_w = cubic_.evaluate(w_tm);
  const auto& nu = grid_.eigenvalues();
  SpectralCoeffs rhs = forward_transform(y_prev);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += tau_ * (-nu[i] * w_tm[i] - f_of_w[i]);
  shifted_.set_shift(w_tm);
  return inverse_transform(shifted_.solve(rhs));
}

ScalarField step_implicit(const ScalarField& u_prev, std::span<const double> dW,
                          const NoiseSpec& spec, double tau, const SolverConfig& solver) {
  require_resolvent_tau(tau);
  return Stepper(u_prev.grid(), spec, tau, solver).implicit(u_prev, dW);
}

ScalarField step_transformed_additive(const ScalarField& y_prev, const ScalarField& w_tm, double tau,
                                      const SolverConfig& solver) {
  require_resolvent_tau(tau);
  NoiseSpec none;
  none.num_modes = 1;
  Stepper stepper(y_prev.grid(), none, tau, solver);
  return stepper.transformed(y_prev, forward_transform(w_tm));
}

// ---------------------------------------------------------------------------

namespace {

WienerPath path_at_level(const WienerPath& path, double tau) {
  if (std::abs(path.tau() - tau) <= 1e-12 * tau) return path;
  const double ratio = tau / path.tau();
  const double rounded = std::round(ratio);
  if (ratio < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio ||
      !std::has_single_bit(static_cast<std::size_t>(rounded))) {
    throw InvalidArgument("path step " + format_double(path.tau()) +
                          " does not refine the scheme step " + format_double(tau) +
                          " by a power of two");
  }
  return coarsen(path, static_cast<std::size_t>(rounded));
}

}  // namespace

ScalarField march(const SchemeConfig& cfg, const ScalarField& u0, const NoiseSpec& spec,
                  const WienerPath& path, const StateObserver& observer) {
  cfg.validate(false);
  if (!u0.all_finite()) throw InvalidArgument("initial state has non-finite entries");
  if (cfg.variant == SchemeVariant::TransformedAdditive && spec.variant != NoiseVariant::Additive) {
    throw InvalidArgument("the transformed scheme requires additive noise");
  }
  const WienerPath level = path_at_level(path, cfg.tau);
  if (level.num_steps() < cfg.num_steps) {
    throw InvalidArgument("path has " + std::to_string(level.num_steps()) +
                          " steps at the scheme level but " + std::to_string(cfg.num_steps) +
                          " are required");
  }
  Stepper stepper(u0.grid(), spec, cfg.tau, cfg.solver);
  if (level.num_modes() != stepper.diffusion().num_modes()) {
    throw InvalidArgument("path carries " + std::to_string(level.num_modes()) +
                          " modes but the noise spec resolves " +
                          std::to_string(stepper.diffusion().num_modes()));
  }

  ScalarField u = u0;
  if (observer) observer(0, u);
  SpectralCoeffs w_acc(u0.grid());
  ScalarField y = u0;
  for (std::size_t m = 1; m <= cfg.num_steps; ++m) {
    try {
      if (cfg.variant == SchemeVariant::Implicit) {
        u = stepper.implicit(u, level.increment(m - 1));
      } else {
        w_acc += forward_transform(stepper.diffusion().additive_field(level.increment(m - 1)));
        y = stepper.transformed(y, w_acc);
        u = y;
        u += inverse_transform(w_acc);
      }
    } catch (const NoConvergence& e) {
      std::string context = "step " + std::to_string(m);
      if (!e.context().empty()) context += ", " + e.context();
      throw NoConvergence(e.iterations(), e.residual(), context);
    }
    if (observer) observer(m, u);
  }
  return u;
}

TrajectoryRecord run(const SchemeConfig& cfg, const ScalarField& u0, const NoiseSpec& spec,
                     const WienerPath& path) {
  TrajectoryRecord rec;
  rec.tau = cfg.tau;
  const bool dealias = cfg.solver.dealias;
  rec.energies.reserve(cfg.num_steps + 1);
  march(cfg, u0, spec, path, [&](std::size_t m, const ScalarField& u) {
    const SpectralCoeffs uh = forward_transform(u);
    rec.energies.push_back(energy(uh, dealias));
    const SpectralCoeffs grad = energy_gradient(uh, dealias);
    const double g = l2_norm(grad);
    rec.dissipation.push_back(g * g);
    rec.l2_norms.push_back(l2_norm(u));
    if (cfg.record == RecordMode::EveryStep || m == 0 || m == cfg.num_steps) rec.states.push_back(u);
  });
  rec.increments_consumed = cfg.num_steps;
  return rec;
}

LedgerReport energy_ledger_check(const TrajectoryRecord& traj, double tau, LedgerMode mode,
                                 double equilibrium_tol) {
  if (traj.energies.empty()) throw InvalidArgument("empty trajectory");
  LedgerReport report;
  const double e0 = traj.energies.front().energy;
  report.initial_energy = e0;
  report.max_energy = e0;
  report.min_margin = std::numeric_limits<double>::infinity();
  const double slack = 1e-8 * (1.0 + std::abs(e0));
  double cumulative = 0.0;
  for (std::size_t m = 1; m < traj.energies.size(); ++m) {
    const double em = traj.energies[m].energy;
    cumulative += tau * traj.dissipation[m];
    report.max_energy = std::max(report.max_energy, em);
    const double lhs = em + cumulative;
    report.min_margin = std::min(report.min_margin, e0 - lhs);
    if (mode == LedgerMode::Deterministic && lhs > e0 + slack) {
      throw InequalityViolated(m, lhs, e0 + slack);
    }
    const bool at_equilibrium = std::sqrt(traj.dissipation[m - 1]) <= equilibrium_tol;
    if (!at_equilibrium && !(em < traj.energies[m - 1].energy)) report.strictly_decreasing = false;
  }
  report.dissipation_sum = cumulative;
  if (traj.energies.size() == 1) report.min_margin = 0.0;
  return report;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& traj) {
  os << "step,t,energy,dirichlet_part,potential_part,dissipation,l2_norm\n";
  for (std::size_t m = 0; m < traj.energies.size(); ++m) {
    const auto& e = traj.energies[m];
    os << m << ',' << format_double(static_cast<double>(m) * traj.tau) << ','
       << format_double(e.energy) << ',' << format_double(e.dirichlet_part) << ','
       << format_double(e.potential_part) << ',' << format_double(traj.dissipation[m]) << ','
       << format_double(traj.l2_norms[m]) << '\n';
  }
}

// ---------------------------------------------------------------------------

InitialPreset parse_initial_preset(const std::string& name) {
  if (name == "sin") return InitialPreset::Sin;
  if (name == "two_interface") return InitialPreset::TwoInterface;
  if (name == "constant") return InitialPreset::Constant;
  throw InvalidArgument("unknown initial preset '" + name + "' (expected sin, two_interface, constant)");
}

std::string to_string(InitialPreset p) {
  switch (p) {
    case InitialPreset::Sin:
      return "sin";
    case InitialPreset::TwoInterface:
      return "two_interface";
    case InitialPreset::Constant:
      return "constant";
  }
  return "sin";
}

ScalarField initial_condition(const GridSpec& grid, InitialPreset preset, double value) {
  switch (preset) {
    case InitialPreset::Sin:
      return ScalarField::from_function(grid, [d = grid.dim()](const std::array<double, 3>& x) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += std::sin(x[i]);
        return s;
      });
    case InitialPreset::TwoInterface: {
      // Projected onto the grid's resolved modes to remove any Nyquist content.
      SpectralCoeffs c = forward_transform(ScalarField::from_function(
          grid, [](const std::array<double, 3>& x) { return std::tanh(2.0 * std::sin(x[0])); }));
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (grid.is_nyquist(i)) c[i] = 0.0;
      }
      return inverse_transform(c);
    }
    case InitialPreset::Constant:
      return ScalarField::constant(grid, value);
  }
  return ScalarField(grid);
}

}  // namespace spdeac
