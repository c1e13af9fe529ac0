// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>

#include "spdeac/energy.hpp"
#include "spdeac/errors.hpp"
#include "spdeac/format.hpp"
#include "spdeac/integrator.hpp"
#include "spdeac/noise.hpp"
#include "spdeac/philox.hpp"
#include "spdeac/resolvent.hpp"
#include "spdeac/spectral.hpp"

namespace spdeac {

namespace {

constexpr double kTaus[] = {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0};

// First nonzero component positive: one representative per conjugate pair.
bool canonical(const std::array<int, 3>& k, int dim) {
  for (int d = 0; d < dim; ++d) {
    if (k[d] != 0) return k[d] > 0;
  }
  return true;
}

double uniform(std::uint64_t seed, std::uint64_t i) {
  return uniform_open01(mix_seed(seed, i));
}

OracleCheck guarded(const std::string& id, const std::string& estimate,
                    const std::function<void(OracleCheck&)>& body) {
  OracleCheck check;
  check.id = id;
  check.estimate = estimate;
  try {
    body(check);
  } catch (const std::exception& e) {
    check.passed = false;
    check.detail = std::string("exception: ") + e.what();
  }
  return check;
}

}  // namespace

ScalarField random_smooth_field(const GridSpec& grid, std::uint64_t seed, double rms,
                                int max_wavenumber) {
  SpectralCoeffs c(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_nyquist(i)) continue;
    const auto k = grid.wavevector(i);
    int sup = 0;
    double nu = 0.0;
    for (int d = 0; d < grid.dim(); ++d) {
      sup = std::max(sup, std::abs(k[d]));
      nu += static_cast<double>(k[d]) * k[d];
    }
    if (sup > max_wavenumber || !canonical(k, grid.dim())) continue;
    const double weight = 1.0 / std::sqrt(1.0 + nu);
    const double a = counter_normal(seed, i, 0);
    if (sup == 0) {
      c[i] = weight * a;
      continue;
    }
    const double b = counter_normal(seed, i, 1);
    c[i] = {weight * a, weight * b};
    std::array<int, 3> minus{};
    for (int d = 0; d < grid.dim(); ++d) minus[d] = -k[d];
    c[grid.flatten(minus)] = std::conj(c[i]);
  }
  ScalarField f = inverse_transform(c);
  const double norm = l2_norm(f);
  if (norm > 0.0) f *= rms * std::sqrt(grid.volume()) / norm;
  return f;
}

OracleCheck check_resolvent_smoothing(const OracleOptions& opts) {
  return guarded("resolvent_smoothing", "|A^-b (Id - S_tau)| <= tau^b and (Id + tau A) S_tau = Id",
                 [&](OracleCheck& check) {
    const GridSpec grid(1, opts.n);
    // Unit coefficient on every nonconstant mode; the constant mode is annihilated by Id - S_tau.
    SpectralCoeffs ones(grid);
    for (std::size_t i = 1; i < grid.size(); ++i) ones[i] = 1.0;
    double worst_ratio = 0.0;
    std::ostringstream where;
    for (double tau : kTaus) {
      SpectralCoeffs defect = ones;
      defect -= resolvent_s_tau(ones, tau);
      if (std::abs(defect[0]) > 0.0) {
        throw Error("Id - S_tau does not annihilate the constant mode");
      }
      for (int step = 0; step <= 10; ++step) {
        const double beta = 0.1 * step;
        const SpectralCoeffs mapped = apply_fractional_power(defect, -beta);
        const double bound = std::pow(tau, beta);
        for (std::size_t i = 1; i < grid.size(); ++i) {
          const double ratio = std::abs(mapped[i]) / bound;
          if (ratio > worst_ratio) {
            worst_ratio = ratio;
            where.str("");
            where << "tau " << format_double(tau) << ", beta " << format_double(beta) << ", k "
                  << grid.wavevector(i)[0];
          }
        }
      }
    }
    // S_tau inverts Id + tau A.
    double worst_inverse = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const double tau = kTaus[trial];
      const ScalarField g = random_smooth_field(grid, mix_seed(opts.seed, 900 + trial), 1.0, opts.n / 2 - 1);
      const ScalarField w = inverse_transform(resolvent_s_tau(forward_transform(g), tau));
      ScalarField back = w;
      back.axpy(-tau, laplacian(w));
      back -= g;
      worst_inverse = std::max(worst_inverse, l2_norm(back) / l2_norm(g));
    }
    check.worst = worst_ratio;
    check.bound = 1.0 + 1e-12;
    check.passed = worst_ratio <= check.bound && worst_inverse <= 1e-12;
    std::ostringstream os;
    os << "max ratio to tau^beta " << format_double(worst_ratio) << " at " << where.str()
       << "; (Id + tau A) S_tau - Id relative defect " << format_double(worst_inverse);
    check.detail = os.str();
  });
}

OracleCheck check_parseval(const OracleOptions& opts) {
  return guarded("parseval", "||f||_{L^2} nodal = ||f^||_{l^2} to rel. 1e-12", [&](OracleCheck& check) {
    const GridSpec grids[] = {GridSpec(1, opts.n), GridSpec(2, 16), GridSpec(3, 8)};
    double worst = 0.0;
    int trial = 0;
    for (const GridSpec& grid : grids) {
      for (int r = 0; r < 5; ++r, ++trial) {
        const ScalarField f =
            random_smooth_field(grid, mix_seed(opts.seed, 100 + trial), 1.0 + r, grid.n() / 2 - 1);
        double nodal = 0.0;
        for (double x : f.values()) nodal += x * x;
        nodal = std::sqrt(nodal * grid.cell_volume());
        const SpectralCoeffs c = forward_transform(f);
        double coeff = 0.0;
        for (const auto& z : c.coeffs()) coeff += std::norm(z);
        coeff = std::sqrt(coeff);
        worst = std::max(worst, std::abs(nodal - coeff) / nodal);
        // Round trip as a second witness.
        ScalarField back = inverse_transform(c);
        back -= f;
        worst = std::max(worst, l2_norm(back) / nodal);
      }
    }
    check.worst = worst;
    check.bound = 1e-12;
    check.passed = worst <= check.bound;
    check.detail = "worst relative mismatch " + format_double(worst);
  });
}

OracleCheck check_energy_gradient(const OracleOptions& opts) {
  return guarded("energy_gradient", "central differences of E match <DE(u), h> with O(eps^2) decay",
                 [&](OracleCheck& check) {
    const GridSpec grid(1, opts.n);
    const ScalarField u = random_smooth_field(grid, mix_seed(opts.seed, 200), 1.0);
    const ScalarField h = random_smooth_field(grid, mix_seed(opts.seed, 201), 1.0);
    const double exact = l2_inner(energy_gradient(u), h);
    const double eps[] = {1e-2, 1e-3, 1e-4};
    double err[3];
    for (int i = 0; i < 3; ++i) {
      ScalarField plus = u, minus = u;
      plus.axpy(eps[i], h);
      minus.axpy(-eps[i], h);
      err[i] = std::abs((energy(plus).energy - energy(minus).energy) / (2.0 * eps[i]) - exact);
    }
    // Observed orders between consecutive eps; anything below round-off counts as converged.
    const double floor = 1e-12 * (1.0 + std::abs(exact));
    double worst_order = 2.0;
    for (int i = 0; i < 2; ++i) {
      if (err[i + 1] <= floor) continue;
      worst_order = std::min(worst_order, std::log10(err[i] / err[i + 1]));
    }
    check.worst = worst_order;
    check.bound = 1.8;
    check.passed = worst_order >= check.bound && err[0] <= 1e-2 * (1.0 + std::abs(exact));
    std::ostringstream os;
    os << "errors " << format_double(err[0]) << ", " << format_double(err[1]) << ", "
       << format_double(err[2]) << "; worst observed order " << format_double(worst_order);
    check.detail = os.str();
  });
}

namespace {

struct RandomInput {
  ScalarField g;
  double tau;
};

RandomInput random_input(const GridSpec& grid, std::uint64_t seed, int i) {
  const double amplitude = 0.2 + 2.8 * uniform(seed, 3 * static_cast<std::uint64_t>(i));
  return {random_smooth_field(grid, mix_seed(seed, 3 * static_cast<std::uint64_t>(i) + 1), amplitude),
          kTaus[i % 3]};
}

}  // namespace

OracleCheck check_resolvent_identity(const OracleOptions& opts) {
  return guarded("resolvent_identity", "||T_tau g - (S_tau g - tau S_tau f(T_tau g))|| <= 10 tol",
                 [&](OracleCheck& check) {
    const GridSpec grid(1, opts.n);
    SolverConfig cfg;
    cfg.tol_residual = opts.tol;
    double worst = 0.0;
    for (int i = 0; i < opts.random_inputs; ++i) {
      const RandomInput in = random_input(grid, mix_seed(opts.seed, 300), i);
      const ScalarField v = solve_t_tau(in.g, in.tau, cfg);
      SpectralCoeffs rhs = forward_transform(in.g);
      rhs.axpy(-in.tau, forward_transform(nonlinearity_f(v)));
      ScalarField diff = v;
      diff -= inverse_transform(resolvent_s_tau(rhs, in.tau));
      worst = std::max(worst, l2_norm(diff));
    }
    check.worst = worst;
    check.bound = 10.0 * opts.tol;
    check.passed = worst <= check.bound;
    check.detail = "worst defect " + format_double(worst) + " over " + std::to_string(opts.random_inputs) +
                   " random g";
  });
}

OracleCheck check_resolvent_growth(const OracleOptions& opts) {
  return guarded("resolvent_growth", "||T_tau g|| <= (1 - tau)^{-1} ||g||", [&](OracleCheck& check) {
    const GridSpec grid(1, opts.n);
    SolverConfig cfg;
    cfg.tol_residual = opts.tol;
    double worst = 0.0;
    for (int i = 0; i < opts.random_inputs; ++i) {
      const RandomInput in = random_input(grid, mix_seed(opts.seed, 300), i);
      const ScalarField v = solve_t_tau(in.g, in.tau, cfg);
      worst = std::max(worst, l2_norm(v) * (1.0 - in.tau) / l2_norm(in.g));
    }
    check.worst = worst;
    check.bound = 1.0;
    check.passed = worst <= check.bound;
    check.detail = "worst (1 - tau) ||T_tau g|| / ||g|| = " + format_double(worst);
  });
}

OracleCheck check_resolvent_derivative(const OracleOptions& opts) {
  return guarded("resolvent_derivative", "||DT_tau(g) h|| <= ||h|| + 10 tol", [&](OracleCheck& check) {
    const GridSpec grid(1, opts.n);
    SolverConfig cfg;
    cfg.tol_residual = opts.tol;
    double worst = -std::numeric_limits<double>::infinity();
    std::string where;
    for (int i = 0; i < opts.random_pairs; ++i) {
      const RandomInput in = random_input(grid, mix_seed(opts.seed, 400), i);
      const ScalarField h = random_smooth_field(grid, mix_seed(opts.seed, 500 + static_cast<std::uint64_t>(i)), 1.0);
      const ScalarField dh = apply_dt_tau(in.g, h, in.tau, cfg);
      const double excess = l2_norm(dh) - l2_norm(h);
      if (excess > worst) {
        worst = excess;
        where = "pair " + std::to_string(i) + " (tau " + format_double(in.tau) + ", ||g|| " +
                format_double(l2_norm(in.g)) + ")";
      }
    }
    check.worst = worst;
    check.bound = 10.0 * opts.tol;
    check.passed = worst <= check.bound;
    check.detail = "worst ||DT h|| - ||h|| = " + format_double(worst) + " at " + where;
  });
}

OracleCheck check_energy_inequality(const OracleOptions&) {
  return guarded("energy_inequality", "E(u_m) + tau sum ||DE(u_l)||^2 <= E(u_0), E strictly decreasing",
                 [&](OracleCheck& check) {
    const GridSpec grid(1, 64);
    SchemeConfig cfg;
    cfg.tau = 1.0 / 32.0;
    cfg.num_steps = 64;
    NoiseSpec spec;  // zero amplitude
    const WienerPath path = sample_path(0, resolved_noise_modes(spec, grid), cfg.tau, cfg.num_steps);
    const TrajectoryRecord traj = run(cfg, initial_condition(grid, InitialPreset::Sin), spec, path);
    const LedgerReport rep = energy_ledger_check(traj, cfg.tau, LedgerMode::Deterministic);
    check.worst = -rep.min_margin;
    check.bound = 1e-8 * (1.0 + std::abs(rep.initial_energy));
    check.passed = rep.strictly_decreasing;
    check.detail = "min margin " + format_double(rep.min_margin) +
                   (rep.strictly_decreasing ? "" : "; energy not strictly decreasing");
  });
}

OracleCheck check_scheme_equivalence(const OracleOptions& opts) {
  return guarded("scheme_equivalence", "implicit u_m = y_m + Phi W(t_m) under additive noise",
                 [&](OracleCheck& check) {
    const GridSpec grid(1, 64);
    NoiseSpec spec;
    spec.variant = NoiseVariant::Additive;
    spec.num_modes = 8;
    spec.decay = 2.0;
    spec.amplitude = 0.5;
    SchemeConfig cfg;
    cfg.tau = 1.0 / 64.0;
    cfg.num_steps = 32;
    const ScalarField u0 = initial_condition(grid, InitialPreset::Sin);
    double worst = 0.0;
    for (int p = 0; p < 2; ++p) {
      const WienerPath path = sample_path(mix_seed(opts.seed, 600 + static_cast<std::uint64_t>(p)), 8, cfg.tau,
                                          cfg.num_steps);
      std::vector<ScalarField> implicit_states;
      march(cfg, u0, spec, path, [&](std::size_t, const ScalarField& u) { implicit_states.push_back(u); });
      SchemeConfig transformed = cfg;
      transformed.variant = SchemeVariant::TransformedAdditive;
      march(transformed, u0, spec, path, [&](std::size_t m, const ScalarField& u) {
        ScalarField d = u;
        d -= implicit_states[m];
        worst = std::max(worst, l2_norm(d));
      });
    }
    check.worst = worst;
    check.bound = 1e-8;
    check.passed = worst <= check.bound;
    check.detail = "max_m ||u_m - (y_m + Phi W(t_m))|| = " + format_double(worst);
  });
}

std::vector<OracleCheck> run_operator_oracles(const OracleOptions& opts) {
  return {check_resolvent_smoothing(opts), check_parseval(opts),           check_energy_gradient(opts),
          check_resolvent_identity(opts),  check_resolvent_growth(opts), check_resolvent_derivative(opts)};
}

std::vector<OracleCheck> run_selftest_suite(const OracleOptions& opts) {
  std::vector<OracleCheck> out = run_operator_oracles(opts);
  out.push_back(check_energy_inequality(opts));
  out.push_back(check_scheme_equivalence(opts));
  return out;
}

}  // namespace spdeac
