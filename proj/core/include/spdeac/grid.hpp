// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spdeac {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Uniform grid on the torus (-pi, pi]^dim with n points per axis.
///
/// Node j along an axis sits at x_j = -pi + j * h, h = 2 pi / n. Flat indices are
/// row-major with the last axis fastest.
class GridSpec {
 public:
  /// Throws InvalidArgument unless dim in {1,2,3} and n is a power of two >= 4.
  GridSpec(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return kTwoPi / n_; }
  /// Trapezoid quadrature weight h^dim.
  double cell_volume() const noexcept;
  /// (2 pi)^dim.
  double volume() const noexcept;

  /// Integer wavenumber on one axis for FFT-ordered index i: i for i <= n/2, i - n otherwise.
  int wavenumber(int i) const noexcept { return i <= n_ / 2 ? i : i - n_; }
  /// Per-axis indices of a flat index (unused axes are zero).
  std::array<int, 3> unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(const std::array<int, 3>& idx) const noexcept;
  /// Wavevector of a flat spectral index.
  std::array<int, 3> wavevector(std::size_t flat) const noexcept;
  /// Coordinates of a node.
  std::array<double, 3> node(std::size_t flat) const noexcept;
  /// True when any component of the wavevector equals n/2.
  bool is_nyquist(std::size_t flat) const noexcept;

  /// Eigenvalues |k|^2 of A = -Laplacian in flat spectral order (cached per thread).
  const std::vector<double>& eigenvalues() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int dim_;
  int n_;
  std::size_t size_;
};

/// Real nodal values on a GridSpec.
class ScalarField {
 public:
  explicit ScalarField(GridSpec grid);
  ScalarField(GridSpec grid, std::vector<double> values);

  /// Samples fn at every node.
  static ScalarField from_function(GridSpec grid,
                                   const std::function<double(const std::array<double, 3>&)>& fn);
  static ScalarField constant(GridSpec grid, double value);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  bool all_finite() const noexcept;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s) noexcept;
  /// this += a * x
  ScalarField& axpy(double a, const ScalarField& x);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Coefficients in the orthonormal basis e_k(x) = (2 pi)^{-dim/2} exp(i k.x).
///
/// Stored in FFT order: flat index i maps to wavevector grid.wavevector(i), each
/// component in {-n/2+1, ..., n/2}. A real field has coeff(-k) = conj(coeff(k)).
class SpectralCoeffs {
 public:
  using value_type = std::complex<double>;

  explicit SpectralCoeffs(GridSpec grid);
  SpectralCoeffs(GridSpec grid, std::vector<value_type> coeffs);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<value_type> coeffs() noexcept { return coeffs_; }
  std::span<const value_type> coeffs() const noexcept { return coeffs_; }
  value_type& operator[](std::size_t i) noexcept { return coeffs_[i]; }
  const value_type& operator[](std::size_t i) const noexcept { return coeffs_[i]; }

  /// Coefficient at integer wavevector k (components reduced modulo n).
  value_type at(const std::array<int, 3>& k) const noexcept;

  SpectralCoeffs& operator+=(const SpectralCoeffs& other);
  SpectralCoeffs& operator-=(const SpectralCoeffs& other);
  SpectralCoeffs& operator*=(double s) noexcept;
  SpectralCoeffs& axpy(double a, const SpectralCoeffs& x);

 private:
  GridSpec grid_;
  std::vector<value_type> coeffs_;
};

}  // namespace spdeac
