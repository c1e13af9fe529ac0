// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "spdeac/errors.hpp"
#include "spdeac/fft.hpp"
#include "spdeac/grid.hpp"
#include "spdeac/spectral.hpp"

namespace spdeac {
namespace {

using cplx = std::complex<double>;

// Direct O(n^2) sum, the reference for every fast path.
std::vector<cplx> naive_dft(const std::vector<cplx>& x, double sign) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = sign * kTwoPi * static_cast<double>(j * k % n) / static_cast<double>(n);
      acc += x[j] * cplx(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

std::vector<cplx> random_complex(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<cplx> x(n);
  for (auto& v : x) v = {normal(gen), normal(gen)};
  return x;
}

double max_abs_diff(const std::vector<cplx>& a, std::span<const cplx> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

class Radix2Lengths : public ::testing::TestWithParam<std::size_t> {};

TEST_P(Radix2Lengths, MatchesDirectSumBothDirections) {
  const std::size_t n = GetParam();
  const auto x = random_complex(n, static_cast<unsigned>(n));
  auto fwd = x;
  fft::plan_for(n).execute(fwd, fft::Direction::Forward);
  EXPECT_LT(max_abs_diff(naive_dft(x, -1.0), fwd), 1e-12 * static_cast<double>(n));
  auto inv = x;
  fft::plan_for(n).execute(inv, fft::Direction::Inverse);
  EXPECT_LT(max_abs_diff(naive_dft(x, +1.0), inv), 1e-12 * static_cast<double>(n));
}

TEST_P(Radix2Lengths, RealPathsAgreeWithComplexTransform) {
  const std::size_t n = GetParam();
  if (n < 4) GTEST_SKIP();
  std::mt19937 gen(7);
  std::normal_distribution<double> normal;
  std::vector<double> x(n);
  for (auto& v : x) v = normal(gen);
  std::vector<cplx> full(x.begin(), x.end()), packed(n);
  fft::plan_for(n).execute(full, fft::Direction::Forward);
  fft::real_forward(x, packed);
  EXPECT_LT(max_abs_diff(full, packed), 1e-12 * static_cast<double>(n));

  // Non-Hermitian input: the real path returns the real part of the full inverse.
  const auto spectrum = random_complex(n, 11);
  auto inv = spectrum;
  fft::plan_for(n).execute(inv, fft::Direction::Inverse);
  std::vector<double> real(n);
  fft::hermitian_inverse(spectrum, real);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(real[i], inv[i].real(), 1e-12 * static_cast<double>(n));
}

INSTANTIATE_TEST_SUITE_P(PowersOfTwo, Radix2Lengths, ::testing::Values(2, 4, 8, 32, 128, 512));

TEST(Radix2, RejectsNonPowerOfTwo) {
  EXPECT_THROW(fft::Radix2Plan(12), InvalidArgument);
  EXPECT_THROW(fft::plan_for(0), InvalidArgument);
}

TEST(Radix2, MultiDimensionalMatchesSeparableDirectSum) {
  const std::size_t n = 8;
  const auto x = random_complex(n * n, 3);
  auto fast = x;
  fft::transform(fast, 2, n, fft::Direction::Forward);
  // Reference: direct 2-d sum.
  double worst = 0.0;
  for (std::size_t k0 = 0; k0 < n; ++k0) {
    for (std::size_t k1 = 0; k1 < n; ++k1) {
      cplx acc = 0.0;
      for (std::size_t j0 = 0; j0 < n; ++j0) {
        for (std::size_t j1 = 0; j1 < n; ++j1) {
          const double angle = -kTwoPi * static_cast<double>(j0 * k0 + j1 * k1) / static_cast<double>(n);
          acc += x[j0 * n + j1] * cplx(std::cos(angle), std::sin(angle));
        }
      }
      worst = std::max(worst, std::abs(acc - fast[k0 * n + k1]));
    }
  }
  EXPECT_LT(worst, 1e-11);
}

TEST(GridSpec, ValidatesDimensionAndSize) {
  EXPECT_THROW(GridSpec(0, 16), InvalidArgument);
  EXPECT_THROW(GridSpec(4, 16), InvalidArgument);
  EXPECT_THROW(GridSpec(1, 2), InvalidArgument);
  EXPECT_THROW(GridSpec(1, 48), InvalidArgument);
  EXPECT_NO_THROW(GridSpec(3, 4));
}

TEST(GridSpec, GeometryAndOrdering) {
  const GridSpec g(2, 8);
  EXPECT_EQ(g.size(), 64u);
  EXPECT_DOUBLE_EQ(g.spacing(), kTwoPi / 8);
  EXPECT_DOUBLE_EQ(g.volume(), kTwoPi * kTwoPi);
  EXPECT_NEAR(g.cell_volume() * static_cast<double>(g.size()), g.volume(), 1e-12);
  EXPECT_EQ(g.wavenumber(4), 4);
  EXPECT_EQ(g.wavenumber(5), -3);
  EXPECT_DOUBLE_EQ(g.node(0)[0], -kPi);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.flatten(g.unflatten(i)), i);
  const auto k = g.wavevector(g.flatten({7, 2, 0}));
  EXPECT_EQ(k[0], -1);
  EXPECT_EQ(k[1], 2);
  EXPECT_TRUE(g.is_nyquist(g.flatten({4, 1, 0})));
  EXPECT_FALSE(g.is_nyquist(g.flatten({3, 1, 0})));
  EXPECT_DOUBLE_EQ(g.eigenvalues()[g.flatten({7, 2, 0})], 5.0);
}

// A single Fourier mode maps to a unit coefficient at its wavevector, for every dimension.
TEST(Transform, OrthonormalModeHasUnitCoefficient) {
  for (int dim = 1; dim <= 3; ++dim) {
    const GridSpec g(dim, 8);
    const std::array<int, 3> k{2, dim > 1 ? -1 : 0, dim > 2 ? 3 : 0};
    const double norm = std::pow(kTwoPi, -0.5 * dim);
    const auto field = ScalarField::from_function(g, [&](const std::array<double, 3>& x) {
      return norm * std::cos(k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
    });
    const SpectralCoeffs c = forward_transform(field);
    std::array<int, 3> minus{-k[0], -k[1], -k[2]};
    EXPECT_NEAR(std::abs(c.at(k) - 0.5), 0.0, 1e-14) << "dim " << dim;
    EXPECT_NEAR(std::abs(c.at(minus) - 0.5), 0.0, 1e-14) << "dim " << dim;
    double others = 0.0;
    for (const auto& z : c.coeffs()) others += std::norm(z);
    EXPECT_NEAR(others, 0.5, 1e-13);
  }
}

TEST(Transform, RoundTripAndParsevalAllDimensions) {
  std::mt19937 gen(5);
  std::normal_distribution<double> normal;
  for (int dim = 1; dim <= 3; ++dim) {
    const GridSpec g(dim, dim == 3 ? 8 : 16);
    ScalarField f(g);
    for (auto& v : f.values()) v = normal(gen);
    const SpectralCoeffs c = forward_transform(f);
    const ScalarField back = inverse_transform(c);
    double nodal = 0.0, coeff = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      nodal += f[i] * f[i];
      diff = std::max(diff, std::abs(back[i] - f[i]));
      coeff += std::norm(c[i]);
    }
    EXPECT_LT(diff, 1e-13);
    EXPECT_NEAR(nodal * g.cell_volume(), coeff, 1e-12 * coeff);
  }
}

}  // namespace
}  // namespace spdeac
