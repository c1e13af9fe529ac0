// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace spdeac::fft {

enum class Direction { Forward, Inverse };

/// In-place iterative radix-2 Cooley-Tukey transform of a fixed length.
///
/// Forward computes X_k = sum_j x_j exp(-2 pi i jk/n); Inverse uses the opposite sign.
/// Neither direction is normalized.
class Radix2Plan {
 public:
  explicit Radix2Plan(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  /// exp(-2 pi i j / n) for j < n/2.
  std::complex<double> twiddle(std::size_t j) const noexcept { return twiddles_[j]; }
  void execute(std::span<std::complex<double>> data, Direction dir) const;
  /// Transforms `count` interleaved sequences: element j of sequence s is data[s + j*stride].
  void execute_strided(std::complex<double>* data, std::size_t stride, std::size_t count,
                       Direction dir, std::vector<std::complex<double>>& scratch) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddles_;  // exp(-2 pi i j / n), j < n/2
};

/// Shared immutable plan for length n (thread-safe lookup).
const Radix2Plan& plan_for(std::size_t n);

/// Unnormalized transform of a dim-dimensional n^dim array stored row-major.
void transform(std::span<std::complex<double>> data, int dim, std::size_t n, Direction dir);

/// Forward transform of a real length-n sequence (n >= 4) through one complex transform of
/// length n/2. Writes all n coefficients.
void real_forward(std::span<const double> x, std::span<std::complex<double>> out);

/// Real part of the unnormalized inverse transform of X, computed from the Hermitian part of X
/// through one complex transform of length n/2.
void hermitian_inverse(std::span<const std::complex<double>> X, std::span<double> x);

}  // namespace spdeac::fft
