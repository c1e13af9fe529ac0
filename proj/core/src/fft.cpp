// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/fft.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <memory>
#include <mutex>

#include "spdeac/errors.hpp"

namespace spdeac::fft {

Radix2Plan::Radix2Plan(std::size_t n) : n_(n) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw InvalidArgument("radix-2 transform length must be a power of two >= 2");
  }
  const int bits = std::countr_zero(n);
  bitrev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    }
    bitrev_[i] = r;
  }
  twiddles_.resize(n / 2);
  const double pi = std::acos(-1.0);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double angle = -2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
    twiddles_[j] = {std::cos(angle), std::sin(angle)};
  }
}

void Radix2Plan::execute(std::span<std::complex<double>> data, Direction dir) const {
  if (data.size() != n_) throw InvalidArgument("transform length mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = bitrev_[i];
    if (r > i) std::swap(data[i], data[r]);
  }
  const double conj_sign = dir == Direction::Inverse ? -1.0 : 1.0;
  // Plain real arithmetic: std::complex multiplication goes through the Annex G NaN path.
  auto* z = reinterpret_cast<double*>(data.data());
  const auto* tw = reinterpret_cast<const double*>(twiddles_.data());
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const double wr = tw[2 * j * step];
        const double wi = conj_sign * tw[2 * j * step + 1];
        double* a = z + 2 * (start + j);
        double* b = z + 2 * (start + j + half);
        const double br = b[0] * wr - b[1] * wi;
        const double bi = b[0] * wi + b[1] * wr;
        b[0] = a[0] - br;
        b[1] = a[1] - bi;
        a[0] += br;
        a[1] += bi;
      }
    }
  }
}

void Radix2Plan::execute_strided(std::complex<double>* data, std::size_t stride,
                                 std::size_t count, Direction dir,
                                 std::vector<std::complex<double>>& scratch) const {
  scratch.resize(n_);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t j = 0; j < n_; ++j) scratch[j] = data[s + j * stride];
    execute(scratch, dir);
    for (std::size_t j = 0; j < n_; ++j) data[s + j * stride] = scratch[j];
  }
}

const Radix2Plan& plan_for(std::size_t n) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw InvalidArgument("radix-2 transform length must be a power of two >= 2");
  }
  static std::array<std::unique_ptr<Radix2Plan>, 64> plans;
  static std::array<std::once_flag, 64> flags;
  const auto slot = static_cast<std::size_t>(std::countr_zero(n));
  std::call_once(flags[slot], [&] { plans[slot] = std::make_unique<Radix2Plan>(n); });
  return *plans[slot];
}

void transform(std::span<std::complex<double>> data, int dim, std::size_t n, Direction dir) {
  const Radix2Plan& plan = plan_for(n);
  if (dim == 1) {
    plan.execute(data, dir);
    return;
  }
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= n;
  if (data.size() != total) throw InvalidArgument("transform size mismatch");

  // Contiguous last axis first, then strided passes for the leading axes.
  for (std::size_t row = 0; row < total; row += n) plan.execute(data.subspan(row, n), dir);
  std::vector<std::complex<double>> scratch;
  std::size_t inner = n;
  for (int axis = dim - 2; axis >= 0; --axis) {
    const std::size_t block = inner * n;
    for (std::size_t outer = 0; outer < total; outer += block) {
      plan.execute_strided(data.data() + outer, inner, inner, dir, scratch);
    }
    inner = block;
  }
}

void real_forward(std::span<const double> x, std::span<std::complex<double>> out) {
  const std::size_t n = x.size();
  if (out.size() != n || n < 4) throw InvalidArgument("real transform needs n >= 4 outputs");
  const std::size_t h = n / 2;
  const Radix2Plan& full = plan_for(n);
  std::vector<std::complex<double>> z(h);
  for (std::size_t j = 0; j < h; ++j) z[j] = {x[2 * j], x[2 * j + 1]};
  plan_for(h).execute(z, Direction::Forward);
  // Split the packed spectrum into the even and odd subsequence spectra.
  for (std::size_t k = 0; k <= h; ++k) {
    const std::complex<double> zk = z[k % h];
    const std::complex<double> zc = std::conj(z[(h - k) % h]);
    const std::complex<double> even = 0.5 * (zk + zc);
    const std::complex<double> odd_times_i = 0.5 * (zk - zc);  // i * odd
    const std::complex<double> w = k < h ? full.twiddle(k) : std::complex<double>(-1.0, 0.0);
    const std::complex<double> odd(odd_times_i.imag(), -odd_times_i.real());
    const std::complex<double> wo(w.real() * odd.real() - w.imag() * odd.imag(),
                                  w.real() * odd.imag() + w.imag() * odd.real());
    out[k] = even + wo;
    if (k > 0 && k < h) out[n - k] = std::conj(out[k]);
  }
}

void hermitian_inverse(std::span<const std::complex<double>> X, std::span<double> x) {
  const std::size_t n = X.size();
  if (x.size() != n || n < 4) throw InvalidArgument("real transform needs n >= 4 values");
  const std::size_t h = n / 2;
  const Radix2Plan& full = plan_for(n);
  std::vector<std::complex<double>> z(h);
  for (std::size_t k = 0; k < h; ++k) {
    // Hermitian parts at k and k + h.
    const std::complex<double> a = 0.5 * (X[k] + std::conj(X[(n - k) % n]));
    const std::complex<double> b = 0.5 * (X[k + h] + std::conj(X[(n - k - h) % n]));
    const std::complex<double> even = a + b;
    const std::complex<double> d = a - b;
    const std::complex<double> w = std::conj(full.twiddle(k));
    const std::complex<double> odd(w.real() * d.real() - w.imag() * d.imag(),
                                   w.real() * d.imag() + w.imag() * d.real());
    z[k] = {even.real() - odd.imag(), even.imag() + odd.real()};
  }
  plan_for(h).execute(z, Direction::Inverse);
  for (std::size_t j = 0; j < h; ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
}

}  // namespace spdeac::fft
