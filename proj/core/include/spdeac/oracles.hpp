// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spdeac/grid.hpp"

namespace spdeac {

/// Outcome of one operator-estimate check.
struct OracleCheck {
  std::string id;        ///< stable identifier, e.g. "resolvent_smoothing"
  std::string estimate;  ///< the inequality or identity being checked
  bool passed = false;
  double worst = 0.0;    ///< worst observed value of the checked quantity
  double bound = 0.0;    ///< what it was allowed to be
  std::string detail;
};

struct OracleOptions {
  int n = 64;  ///< 1-d grid size for the operator checks
  std::uint64_t seed = 20260101;
  int random_inputs = 100;  ///< random g for the identity and growth checks
  int random_pairs = 50;    ///< random (g, h) for the derivative bound
  double tol = 1e-10;       ///< solver tolerance; checks allow 10 tol
};

/// Random smooth real field: random trig modes with |kappa_i| <= max_wavenumber and weights
/// (1 + |kappa|^2)^{-1/2}, rescaled to the given root-mean-square amplitude.
ScalarField random_smooth_field(const GridSpec& grid, std::uint64_t seed, double rms,
                                int max_wavenumber = 8);

/// |A^{-beta}(Id - S_tau)| <= tau^beta mode by mode (homogeneous weight), beta in {0, 0.1, .., 1},
/// tau in {1/8, 1/16, 1/32}, plus (Id + tau A) S_tau = Id on random fields.
OracleCheck check_resolvent_smoothing(const OracleOptions& opts);
/// ||f||_{L^2} from nodal values against the coefficient norm, d = 1, 2, 3, rel. 1e-12.
OracleCheck check_parseval(const OracleOptions& opts);
/// Central differences of E against <DE(u), h>: second-order decay over eps in {1e-2, 1e-3, 1e-4}.
OracleCheck check_energy_gradient(const OracleOptions& opts);
/// ||T_tau g - (S_tau g - tau S_tau f(T_tau g))|| <= 10 tol on random g.
OracleCheck check_resolvent_identity(const OracleOptions& opts);
/// ||T_tau g|| <= (1 - tau)^{-1} ||g|| on random g.
OracleCheck check_resolvent_growth(const OracleOptions& opts);
/// ||DT_tau(g) h|| <= ||h|| + 10 tol on random pairs.
OracleCheck check_resolvent_derivative(const OracleOptions& opts);
/// Deterministic discrete energy inequality: d = 1, n = 64, tau = 1/32, u0 = sin x, 64 steps.
OracleCheck check_energy_inequality(const OracleOptions& opts);
/// Implicit and transformed schemes agree under additive noise on a few short paths.
OracleCheck check_scheme_equivalence(const OracleOptions& opts);

/// The operator checks above in order; exceptions become failed checks.
std::vector<OracleCheck> run_operator_oracles(const OracleOptions& opts = {});
/// Operator checks plus the energy inequality and scheme equivalence.
std::vector<OracleCheck> run_selftest_suite(const OracleOptions& opts = {});

}  // namespace spdeac
