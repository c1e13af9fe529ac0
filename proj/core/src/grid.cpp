// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <utility>

#include "spdeac/errors.hpp"

namespace spdeac {

GridSpec::GridSpec(int dim, int n) : dim_(dim), n_(n), size_(1) {
  if (dim < 1 || dim > 3) throw InvalidArgument("grid dimension must be 1, 2 or 3");
  if (n < 4 || !std::has_single_bit(static_cast<unsigned>(n))) {
    throw InvalidArgument("grid points per axis must be a power of two >= 4");
  }
  for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n);
}

double GridSpec::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

double GridSpec::volume() const noexcept { return std::pow(kTwoPi, dim_); }

std::array<int, 3> GridSpec::unflatten(std::size_t flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
  return idx;
}

std::size_t GridSpec::flatten(const std::array<int, 3>& idx) const noexcept {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d) {
    const int i = ((idx[d] % n_) + n_) % n_;
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::array<int, 3> GridSpec::wavevector(std::size_t flat) const noexcept {
  auto idx = unflatten(flat);
  for (int d = 0; d < dim_; ++d) idx[d] = wavenumber(idx[d]);
  return idx;
}

std::array<double, 3> GridSpec::node(std::size_t flat) const noexcept {
  const auto idx = unflatten(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim_; ++d) x[d] = -kPi + idx[d] * spacing();
  return x;
}

bool GridSpec::is_nyquist(std::size_t flat) const noexcept {
  const auto idx = unflatten(flat);
  for (int d = 0; d < dim_; ++d) {
    if (idx[d] == n_ / 2) return true;
  }
  return false;
}

const std::vector<double>& GridSpec::eigenvalues() const {
  thread_local std::map<std::pair<int, int>, std::vector<double>> cache;
  auto [it, inserted] = cache.try_emplace({dim_, n_});
  if (inserted) {
    it->second.resize(size_);
    for (std::size_t i = 0; i < size_; ++i) {
      const auto k = wavevector(i);
      it->second[i] = static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    }
  }
  return it->second;
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(GridSpec grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw InvalidArgument("field size does not match grid");
}

ScalarField ScalarField::from_function(
    GridSpec grid, const std::function<double(const std::array<double, 3>&)>& fn) {
  ScalarField f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) f.values_[i] = fn(grid.node(i));
  return f;
}

ScalarField ScalarField::constant(GridSpec grid, double value) {
  return ScalarField(grid, std::vector<double>(grid.size(), value));
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::axpy(double a, const ScalarField& x) {
  if (!(grid_ == x.grid_)) throw InvalidArgument("grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
  return *this;
}

// ---------------------------------------------------------------------------

SpectralCoeffs::SpectralCoeffs(GridSpec grid) : grid_(grid), coeffs_(grid.size()) {}

SpectralCoeffs::SpectralCoeffs(GridSpec grid, std::vector<value_type> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) throw InvalidArgument("coefficient size does not match grid");
}

SpectralCoeffs::value_type SpectralCoeffs::at(const std::array<int, 3>& k) const noexcept {
  return coeffs_[grid_.flatten(k)];
}

SpectralCoeffs& SpectralCoeffs::operator+=(const SpectralCoeffs& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralCoeffs& SpectralCoeffs::operator-=(const SpectralCoeffs& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralCoeffs& SpectralCoeffs::operator*=(double s) noexcept {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralCoeffs& SpectralCoeffs::axpy(double a, const SpectralCoeffs& x) {
  if (!(grid_ == x.grid_)) throw InvalidArgument("grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * x.coeffs_[i];
  return *this;
}

}  // namespace spdeac
