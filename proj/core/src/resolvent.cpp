// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spdeac/errors.hpp"
#include "spdeac/spectral.hpp"

namespace spdeac {

namespace {

// Fixed point hands over to Newton once the residual contracts by less than this factor
// on consecutive iterations.
constexpr double kStallRatio = 0.5;
constexpr int kStallPatience = 2;
constexpr int kLinearMaxIter = 500;

}  // namespace

void SolverConfig::validate() const {
  if (!(tol_residual > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  if (max_iter < 1) throw InvalidArgument("solver iteration budget must be >= 1");
}

void require_resolvent_tau(double tau) {
  if (!(tau > 0.0 && tau < 0.5)) {
    std::ostringstream os;
    os << "tau = " << tau << " violates the resolvent condition 0 < tau < 1/2";
    throw InvalidArgument(os.str());
  }
}

NonlinearResolvent::NonlinearResolvent(GridSpec grid, double tau, SolverConfig cfg)
    : grid_(grid), tau_(tau), cfg_(cfg), cubic_(grid, cfg.dealias) {
  require_resolvent_tau(tau);
  cfg_.validate();
  const auto& nu = grid.eigenvalues();
  multiplier_.resize(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) multiplier_[i] = 1.0 + tau * nu[i];
}

SpectralCoeffs NonlinearResolvent::residual_vector(const SpectralCoeffs& v,
                                                   const SpectralCoeffs& n_of_v,
                                                   const SpectralCoeffs& rhs) const {
  SpectralCoeffs r(grid_);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = multiplier_[i] * v[i] + tau_ * n_of_v[i] - rhs[i];
  }
  return r;
}

double NonlinearResolvent::residual(const SpectralCoeffs& v, const SpectralCoeffs& rhs) const {
  return l2_norm(residual_vector(v, cubic_.evaluate(v), rhs));
}

SpectralCoeffs NonlinearResolvent::solve(const SpectralCoeffs& rhs, SolveStats* stats_out) const {
  if (!(rhs.grid() == grid_)) throw InvalidArgument("grid mismatch");
  SolveStats stats;
  SpectralCoeffs v = rhs;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] /= multiplier_[i];

  if (cfg_.method == SolverMethod::Newton) {
    v = newton(std::move(v), rhs, cfg_.max_iter, stats);
    if (stats_out) *stats_out = stats;
    return v;
  }

  SpectralCoeffs best = v;
  double best_norm = std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::infinity();
  int slow = 0;
  for (int it = 0; it < cfg_.max_iter; ++it) {
    const SpectralCoeffs r = residual_vector(v, cubic_.evaluate(v), rhs);
    const double rn = l2_norm(r);
    stats.iterations = it + 1;
    stats.residual = rn;
    if (rn <= cfg_.tol_residual) {
      if (stats_out) *stats_out = stats;
      return v;
    }
    if (std::isfinite(rn) && rn < best_norm) {
      best_norm = rn;
      best = v;
    }
    slow = (!std::isfinite(rn) || rn > kStallRatio * previous) ? slow + 1 : 0;
    if (slow >= kStallPatience) {
      v = newton(std::move(best), rhs, cfg_.max_iter - stats.iterations, stats);
      if (stats_out) *stats_out = stats;
      return v;
    }
    previous = rn;
    // v <- S_tau (rhs - tau N(v)) = v - S_tau r
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= r[i] / multiplier_[i];
  }
  throw NoConvergence(stats.iterations, stats.residual, "fixed-point resolvent");
}

SpectralCoeffs NonlinearResolvent::newton(SpectralCoeffs v, const SpectralCoeffs& rhs, int budget,
                                          SolveStats& stats) const {
  stats.used_newton = true;
  std::vector<double> coefficient;
  SpectralCoeffs r = residual_vector(v, cubic_.evaluate(v, &coefficient), rhs);
  double rn = l2_norm(r);
  for (int step = 0;; ++step) {
    stats.residual = rn;
    if (rn <= cfg_.tol_residual) return v;
    if (step >= budget || !std::isfinite(rn)) break;
    ++stats.iterations;

    SpectralCoeffs neg_r = r;
    neg_r *= -1.0;
    const double inner_tol = std::max(0.25 * cfg_.tol_residual, 1e-4 * rn);
    int inner_iterations = 0;
    double inner_residual = 0.0;
    const SpectralCoeffs delta = conjugate_gradient(coefficient, neg_r, inner_tol, kLinearMaxIter,
                                                    inner_iterations, inner_residual);

    double lambda = 1.0;
    for (;;) {
      SpectralCoeffs trial = v;
      trial.axpy(lambda, delta);
      std::vector<double> trial_coefficient;
      SpectralCoeffs trial_r = residual_vector(trial, cubic_.evaluate(trial, &trial_coefficient), rhs);
      const double trial_norm = l2_norm(trial_r);
      if (trial_norm <= (1.0 - 1e-4 * lambda) * rn || lambda < 1e-6) {
        v = std::move(trial);
        r = std::move(trial_r);
        coefficient = std::move(trial_coefficient);
        rn = trial_norm;
        break;
      }
      lambda *= 0.5;
    }
  }
  throw NoConvergence(stats.iterations, rn, "Newton resolvent");
}

SpectralCoeffs NonlinearResolvent::conjugate_gradient(std::span<const double> coefficient,
                                                      const SpectralCoeffs& b, double tol,
                                                      int max_iter, int& iterations,
                                                      double& final_residual) const {
  SpectralCoeffs x(grid_);
  SpectralCoeffs res = b;
  SpectralCoeffs z = res;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] /= multiplier_[i];
  SpectralCoeffs p = z;
  double rz = l2_inner(res, z);
  iterations = 0;
  final_residual = l2_norm(res);
  while (final_residual > tol && iterations < max_iter) {
    SpectralCoeffs ap = cubic_.multiply(coefficient, p);
    for (std::size_t i = 0; i < ap.size(); ++i) ap[i] = multiplier_[i] * p[i] + tau_ * ap[i];
    const double alpha = rz / l2_inner(p, ap);
    x.axpy(alpha, p);
    res.axpy(-alpha, ap);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = res[i] / multiplier_[i];
    const double rz_next = l2_inner(res, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    final_residual = l2_norm(res);
    ++iterations;
  }
  return x;
}

SpectralCoeffs NonlinearResolvent::solve_linearized(const SpectralCoeffs& v, const SpectralCoeffs& h,
                                                    double tol, int max_iter,
                                                    int* iterations) const {
  std::vector<double> coefficient;
  cubic_.evaluate(v, &coefficient);
  int it = 0;
  double rn = 0.0;
  SpectralCoeffs w = conjugate_gradient(coefficient, h, tol, max_iter, it, rn);
  if (rn > tol) throw NoConvergence(it, rn, "linearized resolvent (conjugate gradients)");
  if (iterations) *iterations = it;
  return w;
}

// ---------------------------------------------------------------------------

ScalarField solve_t_tau(const ScalarField& g, double tau, const SolverConfig& cfg, SolveStats* stats) {
  require_resolvent_tau(tau);
  if (!g.all_finite()) throw InvalidArgument("resolvent input has non-finite entries");
  const NonlinearResolvent resolvent(g.grid(), tau, cfg);
  return inverse_transform(resolvent.solve(forward_transform(g), stats));
}

double residual(const ScalarField& v, const ScalarField& g, double tau, bool dealias) {
  const CubicNonlinearity cubic(v.grid(), dealias);
  const SpectralCoeffs vh = forward_transform(v);
  const SpectralCoeffs gh = forward_transform(g);
  const SpectralCoeffs nh = cubic.evaluate(vh);
  const auto& nu = v.grid().eigenvalues();
  SpectralCoeffs r(v.grid());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (1.0 + tau * nu[i]) * vh[i] + tau * nh[i] - gh[i];
  return l2_norm(r);
}

ScalarField apply_dt_tau(const ScalarField& g, const ScalarField& h, double tau,
                         const SolverConfig& cfg) {
  require_resolvent_tau(tau);
  const NonlinearResolvent resolvent(g.grid(), tau, cfg);
  const SpectralCoeffs v = resolvent.solve(forward_transform(g));
  return inverse_transform(
      resolvent.solve_linearized(v, forward_transform(h), cfg.tol_residual, cfg.max_iter));
}

}  // namespace spdeac
