// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "spdeac/grid.hpp"

namespace spdeac {

/// Coefficients of f in the orthonormal exponential basis, so that
/// ||f||^2_{L^2} (trapezoid) equals sum_k |c_k|^2 with no extra factor.
SpectralCoeffs forward_transform(const ScalarField& f);

/// Nodal values of the trigonometric interpolant with the given coefficients.
ScalarField inverse_transform(const SpectralCoeffs& c);

/// A^r: multiplies mode k by |k|^(2r). The constant mode is zeroed for r > 0 and kept for
/// r = 0. For r < 0 it must already vanish; throws NegativePowerOnConstantMode otherwise.
SpectralCoeffs apply_fractional_power(const SpectralCoeffs& c, double r);

/// S_tau = (Id + tau A)^{-1}: multiplies mode k by 1 / (1 + tau |k|^2). Requires tau > 0.
SpectralCoeffs resolvent_s_tau(const SpectralCoeffs& c, double tau);

/// S(t) = exp(-t A): multiplies mode k by exp(-t |k|^2). Requires t >= 0.
SpectralCoeffs heat_semigroup(const SpectralCoeffs& c, double t);

/// Multiplier of S_tau on a mode with eigenvalue nu.
double resolvent_multiplier(double tau, double nu) noexcept;

enum class SobolevWeight {
  Inhomogeneous,  ///< (1 + |k|^2)^r, well defined on constants
  Homogeneous,    ///< |k|^(2r), annihilates constants
};

/// (sum_k w_k^r |c_k|^2)^{1/2}; r = 0 gives the L^2 norm for either weight.
double sobolev_norm(const ScalarField& f, double r,
                    SobolevWeight weight = SobolevWeight::Inhomogeneous);
double sobolev_norm(const SpectralCoeffs& c, double r,
                    SobolevWeight weight = SobolevWeight::Inhomogeneous);

/// Trapezoid L^2 norm and inner product on the grid.
double l2_norm(const ScalarField& f);
double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_norm(const SpectralCoeffs& c);
double l2_inner(const SpectralCoeffs& a, const SpectralCoeffs& b);

/// ||grad f||^2_{L^2} = sum_k |k|^2 |c_k|^2.
double gradient_norm_sq(const SpectralCoeffs& c);
double gradient_norm_sq(const ScalarField& f);

/// Spectral Laplacian (multiplies by -|k|^2).
ScalarField laplacian(const ScalarField& f);

}  // namespace spdeac
