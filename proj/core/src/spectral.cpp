// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/spectral.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "spdeac/errors.hpp"
#include "spdeac/fault_injection.hpp"
#include "spdeac/fft.hpp"

namespace spdeac {

namespace {

// Sign (-1)^{i_1 + ... + i_d} accounts for the first node sitting at -pi. With n a power of two
// the parity of the index sum is the xor of the low bit of every axis index.
double node_phase(const GridSpec& grid, std::size_t flat) {
  const int bits = std::countr_zero(static_cast<unsigned>(grid.n()));
  std::size_t parity = 0;
  for (int d = 0; d < grid.dim(); ++d) parity ^= flat >> (d * bits);
  return (parity & 1) ? -1.0 : 1.0;
}

template <typename Multiplier>
SpectralCoeffs apply_diagonal(const SpectralCoeffs& c, Multiplier&& m) {
  SpectralCoeffs out = c;
  const auto& nu = c.grid().eigenvalues();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= m(nu[i]);
  return out;
}

}  // namespace

SpectralCoeffs forward_transform(const ScalarField& f) {
  const GridSpec& grid = f.grid();
  std::vector<std::complex<double>> data(grid.size());
  if (grid.dim() == 1) {
    fft::real_forward(f.values(), data);
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) data[i] = f[i];
    fft::transform(data, grid.dim(), static_cast<std::size_t>(grid.n()), fft::Direction::Forward);
  }
  const double scale = std::pow(kTwoPi, 0.5 * grid.dim()) / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) data[i] *= scale * node_phase(grid, i);
  return SpectralCoeffs(grid, std::move(data));
}

ScalarField inverse_transform(const SpectralCoeffs& c) {
  const GridSpec& grid = c.grid();
  std::vector<std::complex<double>> data(c.coeffs().begin(), c.coeffs().end());
  const double scale = std::pow(kTwoPi, -0.5 * grid.dim());
  for (std::size_t i = 0; i < grid.size(); ++i) data[i] *= scale * node_phase(grid, i);
  ScalarField f(grid);
  if (grid.dim() == 1) {
    fft::hermitian_inverse(data, f.values());
    return f;
  }
  fft::transform(data, grid.dim(), static_cast<std::size_t>(grid.n()), fft::Direction::Inverse);
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = data[i].real();
  return f;
}

SpectralCoeffs apply_fractional_power(const SpectralCoeffs& c, double r) {
  if (r == 0.0) return c;
  if (r < 0.0) {
    // Round-off from transforming a mean-free field is tolerated.
    const double c0 = std::abs(c[0]);
    if (c0 > 1e-13 * std::max(1.0, l2_norm(c))) throw NegativePowerOnConstantMode(c0);
  }
  return apply_diagonal(c, [r](double nu) { return nu == 0.0 ? 0.0 : std::pow(nu, r); });
}

double resolvent_multiplier(double tau, double nu) noexcept {
  if (active_fault() == Fault::ResolventOffByOne) nu += 1.0;
  return 1.0 / (1.0 + tau * nu);
}

SpectralCoeffs resolvent_s_tau(const SpectralCoeffs& c, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("resolvent requires tau > 0");
  return apply_diagonal(c, [tau](double nu) { return resolvent_multiplier(tau, nu); });
}

SpectralCoeffs heat_semigroup(const SpectralCoeffs& c, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("heat semigroup requires t >= 0");
  if (t == 0.0) return c;
  return apply_diagonal(c, [t](double nu) { return std::exp(-t * nu); });
}

double sobolev_norm(const SpectralCoeffs& c, double r, SobolevWeight weight) {
  const auto& nu = c.grid().eigenvalues();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    double w = 1.0;
    if (r != 0.0) {
      const double base = weight == SobolevWeight::Inhomogeneous ? 1.0 + nu[i] : nu[i];
      w = base == 0.0 ? 0.0 : std::pow(base, r);
    }
    sum += w * std::norm(c[i]);
  }
  return std::sqrt(sum);
}

double sobolev_norm(const ScalarField& f, double r, SobolevWeight weight) {
  if (r == 0.0) return l2_norm(f);
  return sobolev_norm(forward_transform(f), r, weight);
}

double l2_inner(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("grid mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum * a.grid().cell_volume();
}

double l2_norm(const ScalarField& f) { return std::sqrt(l2_inner(f, f)); }

double l2_inner(const SpectralCoeffs& a, const SpectralCoeffs& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("grid mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (std::conj(a[i]) * b[i]).real();
  return sum;
}

double l2_norm(const SpectralCoeffs& c) {
  double sum = 0.0;
  for (const auto& v : c.coeffs()) sum += std::norm(v);
  return std::sqrt(sum);
}

double gradient_norm_sq(const SpectralCoeffs& c) {
  const auto& nu = c.grid().eigenvalues();
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += nu[i] * std::norm(c[i]);
  return sum;
}

double gradient_norm_sq(const ScalarField& f) { return gradient_norm_sq(forward_transform(f)); }

ScalarField laplacian(const ScalarField& f) {
  return inverse_transform(apply_diagonal(forward_transform(f), [](double nu) { return -nu; }));
}

}  // namespace spdeac
