// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/energy.hpp"

#include "spdeac/errors.hpp"
#include "spdeac/fault_injection.hpp"
#include "spdeac/spectral.hpp"

namespace spdeac {

namespace {

double fault_sign() noexcept {
  return active_fault() == Fault::FlipNonlinearitySign ? -1.0 : 1.0;
}

}  // namespace

double double_well_f(double x) noexcept { return fault_sign() * (x * x * x - x); }

double double_well_df(double x) noexcept { return fault_sign() * (3.0 * x * x - 1.0); }

double double_well_potential(double x) noexcept {
  const double w = x * x - 1.0;
  return 0.25 * w * w;
}

// ---------------------------------------------------------------------------

CubicNonlinearity::CubicNonlinearity(GridSpec grid, bool dealias) : eval_(grid, dealias) {}

void CubicNonlinearity::set_shift(const SpectralCoeffs& shift) { shift_ = eval_.to_eval(shift); }

SpectralCoeffs CubicNonlinearity::evaluate(const SpectralCoeffs& v,
                                           std::vector<double>* jacobian_coefficient) const {
  std::vector<double> values = eval_.to_eval(v);
  if (jacobian_coefficient) jacobian_coefficient->resize(values.size());
  const double sign = fault_sign();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i];
    double r = x * x * x - x;
    double total = x;
    if (!shift_.empty()) {
      const double s = shift_[i];
      r += 3.0 * x * x * s + 3.0 * x * s * s;
      total += s;
    }
    values[i] = sign * r;
    if (jacobian_coefficient) (*jacobian_coefficient)[i] = sign * (3.0 * total * total - 1.0);
  }
  return eval_.from_eval(values);
}

SpectralCoeffs CubicNonlinearity::multiply(std::span<const double> coefficient,
                                           const SpectralCoeffs& h) const {
  std::vector<double> values = eval_.to_eval(h);
  if (coefficient.size() != values.size()) throw InvalidArgument("coefficient size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= coefficient[i];
  return eval_.from_eval(values);
}

// ---------------------------------------------------------------------------

ScalarField nonlinearity_f(const ScalarField& u, bool dealias) {
  if (!dealias) {
    ScalarField out(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = double_well_f(u[i]);
    return out;
  }
  CubicNonlinearity cubic(u.grid(), true);
  return inverse_transform(cubic.evaluate(forward_transform(u)));
}

EnergyReport energy(const SpectralCoeffs& u, bool dealias) {
  EnergyReport report;
  report.dirichlet_part = 0.5 * gradient_norm_sq(u);
  const EvaluationGrid eval(u.grid(), dealias);
  const std::vector<double> values = eval.to_eval(u);
  double sum = 0.0;
  for (double x : values) sum += double_well_potential(x);
  report.potential_part = sum * eval.eval_cell_volume();
  report.energy = report.dirichlet_part + report.potential_part;
  return report;
}

EnergyReport energy(const ScalarField& u, bool dealias) {
  if (!dealias) {
    // Nodal quadrature straight from the grid values.
    EnergyReport report;
    report.dirichlet_part = 0.5 * gradient_norm_sq(u);
    double sum = 0.0;
    for (double x : u.values()) sum += double_well_potential(x);
    report.potential_part = sum * u.grid().cell_volume();
    report.energy = report.dirichlet_part + report.potential_part;
    return report;
  }
  return energy(forward_transform(u), true);
}

SpectralCoeffs energy_gradient(const SpectralCoeffs& u, bool dealias) {
  const CubicNonlinearity cubic(u.grid(), dealias);
  SpectralCoeffs g = cubic.evaluate(u);
  const auto& nu = u.grid().eigenvalues();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += nu[i] * u[i];
  return g;
}

ScalarField energy_gradient(const ScalarField& u, bool dealias) {
  return inverse_transform(energy_gradient(forward_transform(u), dealias));
}

}  // namespace spdeac
