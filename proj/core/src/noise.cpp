// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>

#include "spdeac/errors.hpp"
#include "spdeac/philox.hpp"
#include "spdeac/spectral.hpp"

namespace spdeac {

namespace {

int squared_norm(const std::array<int, 3>& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }

// Nonzero wavevectors with all |k_i| < n/2 whose first nonzero component is positive,
// ordered by |k|^2, then lexicographically.
std::vector<std::array<int, 3>> half_space_wavevectors(const GridSpec& grid) {
  const int lim = grid.n() / 2 - 1;
  std::vector<std::array<int, 3>> out;
  const int l1 = grid.dim() >= 2 ? lim : 0;
  const int l2 = grid.dim() >= 3 ? lim : 0;
  for (int a = -lim; a <= lim; ++a) {
    for (int b = -l1; b <= l1; ++b) {
      for (int c = -l2; c <= l2; ++c) {
        const std::array<int, 3> k{a, b, c};
        const int first = a != 0 ? a : (b != 0 ? b : c);
        if (first > 0) out.push_back(k);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    const int nx = squared_norm(x), ny = squared_norm(y);
    if (nx != ny) return nx < ny;
    return x < y;
  });
  return out;
}

double profile_value(NemytskiiProfile p, double xi) {
  switch (p) {
    case NemytskiiProfile::Sin:
      return std::sin(xi);
    case NemytskiiProfile::Rational:
      return 2.0 * xi / (1.0 + xi * xi);
    case NemytskiiProfile::LinearGrowth:
      return std::sqrt(1.0 + xi * xi);
  }
  return 0.0;
}

double profile_lipschitz(NemytskiiProfile p) { return p == NemytskiiProfile::Rational ? 2.0 : 1.0; }

}  // namespace

std::string to_string(NoiseVariant v) {
  switch (v) {
    case NoiseVariant::Additive:
      return "additive";
    case NoiseVariant::Nemytskii:
      return "nemytskii";
    case NoiseVariant::Affine:
      return "affine";
  }
  return "additive";
}

std::string to_string(NemytskiiProfile p) {
  switch (p) {
    case NemytskiiProfile::Sin:
      return "sin";
    case NemytskiiProfile::Rational:
      return "rational";
    case NemytskiiProfile::LinearGrowth:
      return "linear_growth";
  }
  return "sin";
}

int max_noise_modes(const GridSpec& grid) {
  return 2 * static_cast<int>(half_space_wavevectors(grid).size());
}

int default_noise_modes(const GridSpec& grid, double decay) {
  const auto kappa = half_space_wavevectors(grid);
  int count = 0;
  for (const auto& k : kappa) {
    if (std::pow(1.0 + squared_norm(k), -decay) < 1e-8) break;
    count += 2;
  }
  return count;
}

int resolved_noise_modes(const NoiseSpec& spec, const GridSpec& grid) {
  if (spec.num_modes < 0) throw InvalidArgument("noise mode count must be >= 0");
  const int k = spec.num_modes == 0 ? default_noise_modes(grid, spec.decay) : spec.num_modes;
  if (k > max_noise_modes(grid)) {
    throw InvalidArgument("noise mode count " + std::to_string(k) + " exceeds the " +
                          std::to_string(max_noise_modes(grid)) + " modes resolved by the grid");
  }
  return k;
}

double additive_w32_weight(const NoiseSpec& spec, const GridSpec& grid) {
  const DiffusionOperator op(spec, grid);
  double sum = 0.0;
  for (int k = 0; k < op.num_modes(); ++k) {
    const double mu = op.amplitudes()[static_cast<std::size_t>(k)];
    sum += mu * mu * std::pow(1.0 + squared_norm(op.wavevector(k)), 3.0);
  }
  return sum;
}

NoiseBounds noise_bounds(const NoiseSpec& spec, const GridSpec& grid) {
  const DiffusionOperator op(spec, grid);
  double s2 = 0.0;
  for (double mu : op.amplitudes()) s2 += mu * mu;
  const double s = std::sqrt(s2);
  const double root_vol = std::sqrt(grid.volume());
  NoiseBounds b;
  switch (spec.variant) {
    case NoiseVariant::Additive:
      b.growth = op.hs_norm_l2(ScalarField(grid));
      b.lipschitz = 0.0;
      break;
    case NoiseVariant::Nemytskii:
      b.growth = spec.profile == NemytskiiProfile::LinearGrowth ? s * std::max(1.0, root_vol)
                                                                : s * root_vol;
      b.lipschitz = s * profile_lipschitz(spec.profile);
      break;
    case NoiseVariant::Affine:
      b.growth = s * std::max(1.0, root_vol);
      b.lipschitz = s;
      break;
  }
  return b;
}

// ---------------------------------------------------------------------------

DiffusionOperator::DiffusionOperator(NoiseSpec spec, GridSpec grid)
    : spec_(spec), grid_(grid), num_modes_(resolved_noise_modes(spec, grid)) {
  const auto kappa = half_space_wavevectors(grid);
  const std::size_t n = grid.size();
  mu_.resize(static_cast<std::size_t>(num_modes_));
  kappa_.resize(static_cast<std::size_t>(num_modes_));
  basis_.resize(static_cast<std::size_t>(num_modes_) * n);
  partner_.resize(static_cast<std::size_t>(num_modes_) * n);
  for (int k = 0; k < num_modes_; ++k) {
    const auto& kv = kappa[static_cast<std::size_t>(k / 2)];
    const bool is_cos = k % 2 == 0;
    const auto uk = static_cast<std::size_t>(k);
    kappa_[uk] = kv;
    mu_[uk] = spec.amplitude * std::pow(1.0 + squared_norm(kv), -spec.decay);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = grid.node(i);
      const double phase = kv[0] * x[0] + kv[1] * x[1] + kv[2] * x[2];
      basis_[uk * n + i] = is_cos ? std::cos(phase) : std::sin(phase);
      partner_[uk * n + i] = is_cos ? std::sin(phase) : std::cos(phase);
    }
  }
}

std::span<const double> DiffusionOperator::basis(int k) const {
  return std::span<const double>(basis_).subspan(static_cast<std::size_t>(k) * grid_.size(),
                                                 grid_.size());
}

std::span<const double> DiffusionOperator::partner(int k) const {
  return std::span<const double>(partner_).subspan(static_cast<std::size_t>(k) * grid_.size(),
                                                   grid_.size());
}

ScalarField DiffusionOperator::additive_field(std::span<const double> w) const {
  if (static_cast<int>(w.size()) != num_modes_) throw InvalidArgument("noise vector length mismatch");
  ScalarField out(grid_);
  for (int k = 0; k < num_modes_; ++k) {
    const double a = mu_[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(k)];
    if (a == 0.0) continue;
    const auto psi = basis(k);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * psi[i];
  }
  return out;
}

ScalarField DiffusionOperator::apply(const ScalarField& u, std::span<const double> dW) const {
  if (!(u.grid() == grid_)) throw InvalidArgument("grid mismatch");
  ScalarField noise = additive_field(dW);
  switch (spec_.variant) {
    case NoiseVariant::Additive:
      return noise;
    case NoiseVariant::Nemytskii:
      for (std::size_t i = 0; i < noise.size(); ++i) noise[i] *= profile_value(spec_.profile, u[i]);
      return noise;
    case NoiseVariant::Affine: {
      ScalarField offset(grid_);
      for (int k = 0; k < num_modes_; ++k) {
        const double a = mu_[static_cast<std::size_t>(k)] * dW[static_cast<std::size_t>(k)];
        if (a == 0.0) continue;
        const auto psi = partner(k);
        for (std::size_t i = 0; i < offset.size(); ++i) offset[i] += a * psi[i];
      }
      for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = noise[i] * u[i] + offset[i];
      return noise;
    }
  }
  return noise;
}

ScalarField DiffusionOperator::column(const ScalarField& u, int k) const {
  std::vector<double> dW(static_cast<std::size_t>(num_modes_), 0.0);
  dW[static_cast<std::size_t>(k)] = 1.0;
  return apply(u, dW);
}

double DiffusionOperator::hs_norm_l2(const ScalarField& u) const {
  double sum = 0.0;
  for (int k = 0; k < num_modes_; ++k) {
    const ScalarField c = column(u, k);
    sum += l2_inner(c, c);
  }
  return std::sqrt(sum);
}

double DiffusionOperator::hs_distance_l2(const ScalarField& u, const ScalarField& v) const {
  double sum = 0.0;
  for (int k = 0; k < num_modes_; ++k) {
    const ScalarField c = column(u, k) - column(v, k);
    sum += l2_inner(c, c);
  }
  return std::sqrt(sum);
}

ScalarField apply_diffusion(const NoiseSpec& spec, const ScalarField& u, std::span<const double> dW) {
  return DiffusionOperator(spec, u.grid()).apply(u, dW);
}

double hs_norm_l2(const NoiseSpec& spec, const ScalarField& u) {
  return DiffusionOperator(spec, u.grid()).hs_norm_l2(u);
}

// ---------------------------------------------------------------------------

WienerPath::WienerPath(std::uint64_t seed, int num_modes, double tau, std::size_t num_steps,
                       std::vector<double> increments)
    : seed_(seed), num_modes_(num_modes), tau_(tau), num_steps_(num_steps),
      increments_(std::move(increments)) {
  if (num_modes < 0) throw InvalidArgument("path mode count must be >= 0");
  if (!(tau > 0.0)) throw InvalidArgument("path step must be positive");
  if (increments_.size() != num_steps_ * static_cast<std::size_t>(num_modes_)) {
    throw InvalidArgument("path increment storage does not match steps x modes");
  }
}

std::span<const double> WienerPath::increment(std::size_t step) const {
  if (step >= num_steps_) throw InvalidArgument("path step index out of range");
  const auto k = static_cast<std::size_t>(num_modes_);
  return std::span<const double>(increments_).subspan(step * k, k);
}

std::vector<double> WienerPath::value_at(std::size_t m) const {
  if (m > num_steps_) throw InvalidArgument("path time index out of range");
  std::vector<double> w(static_cast<std::size_t>(num_modes_), 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    const auto inc = increment(s);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] += inc[k];
  }
  return w;
}

WienerPath sample_path(std::uint64_t seed, int num_modes, double tau_fine, std::size_t num_steps) {
  if (num_steps < 1) throw InvalidArgument("a path needs at least one step");
  if (!(tau_fine > 0.0)) throw InvalidArgument("path step must be positive");
  const auto k_count = static_cast<std::size_t>(num_modes);
  std::vector<double> inc(num_steps * k_count);
  const double scale = std::sqrt(tau_fine);
  for (std::size_t m = 0; m < num_steps; ++m) {
    for (std::size_t k = 0; k < k_count; ++k) inc[m * k_count + k] = scale * counter_normal(seed, k, m);
  }
  return WienerPath(seed, num_modes, tau_fine, num_steps, std::move(inc));
}

WienerPath coarsen(const WienerPath& path, std::size_t factor) {
  if (factor == 0 || !std::has_single_bit(factor) || path.num_steps() % factor != 0) {
    throw FactorMismatch(factor, path.num_steps());
  }
  const auto k_count = static_cast<std::size_t>(path.num_modes());
  std::vector<double> inc(path.data().begin(), path.data().end());
  std::size_t steps = path.num_steps();
  double tau = path.tau();
  for (std::size_t f = factor; f > 1; f >>= 1) {
    const std::size_t half = steps / 2;
    for (std::size_t m = 0; m < half; ++m) {
      for (std::size_t k = 0; k < k_count; ++k) {
        inc[m * k_count + k] = inc[(2 * m) * k_count + k] + inc[(2 * m + 1) * k_count + k];
      }
    }
    steps = half;
    tau *= 2.0;
    inc.resize(steps * k_count);
  }
  return WienerPath(path.seed(), path.num_modes(), tau, steps, std::move(inc));
}

void write_path(std::ostream& os, const WienerPath& path) {
  const std::uint64_t seed = path.seed();
  const auto modes = static_cast<std::uint64_t>(path.num_modes());
  const double tau = path.tau();
  const auto steps = static_cast<std::uint64_t>(path.num_steps());
  os.write(reinterpret_cast<const char*>(&seed), sizeof seed);
  os.write(reinterpret_cast<const char*>(&modes), sizeof modes);
  os.write(reinterpret_cast<const char*>(&tau), sizeof tau);
  os.write(reinterpret_cast<const char*>(&steps), sizeof steps);
  os.write(reinterpret_cast<const char*>(path.data().data()),
           static_cast<std::streamsize>(path.data().size() * sizeof(double)));
}

WienerPath read_path(std::istream& is) {
  std::uint64_t seed = 0, modes = 0, steps = 0;
  double tau = 0.0;
  is.read(reinterpret_cast<char*>(&seed), sizeof seed);
  is.read(reinterpret_cast<char*>(&modes), sizeof modes);
  is.read(reinterpret_cast<char*>(&tau), sizeof tau);
  is.read(reinterpret_cast<char*>(&steps), sizeof steps);
  if (!is) throw Error("truncated path header");
  std::vector<double> inc(steps * modes);
  is.read(reinterpret_cast<char*>(inc.data()), static_cast<std::streamsize>(inc.size() * sizeof(double)));
  if (!is) throw Error("truncated path body");
  return WienerPath(seed, static_cast<int>(modes), tau, static_cast<std::size_t>(steps), std::move(inc));
}

}  // namespace spdeac
