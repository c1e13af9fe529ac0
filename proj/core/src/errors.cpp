// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/errors.hpp"

#include <sstream>

namespace spdeac {

namespace {

std::string format_no_convergence(int iterations, double residual, const std::string& context) {
  std::ostringstream os;
  os << "no convergence after " << iterations << " iterations (residual " << residual << ")";
  if (!context.empty()) os << ": " << context;
  return os.str();
}

}  // namespace

NegativePowerOnConstantMode::NegativePowerOnConstantMode(double magnitude)
    : Error("negative power of A applied to a field with nonzero constant mode (|c_0| = " +
            std::to_string(magnitude) + ")"),
      magnitude_(magnitude) {}

NoConvergence::NoConvergence(int iterations, double residual, const std::string& context)
    : Error(format_no_convergence(iterations, residual, context)),
      iterations_(iterations),
      residual_(residual),
      context_(context) {}

FactorMismatch::FactorMismatch(std::size_t factor, std::size_t num_steps)
    : Error("coarsening factor " + std::to_string(factor) +
            " must be a power of two dividing the step count " + std::to_string(num_steps)) {}

InequalityViolated::InequalityViolated(std::size_t step, double lhs, double rhs)
    : Error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "discrete energy inequality violated at step " << step << ": " << lhs << " > "
           << rhs;
        return os.str();
      }()),
      step_(step),
      lhs_(lhs),
      rhs_(rhs) {}

UnknownFunctional::UnknownFunctional(const std::string& name)
    : Error("unknown functional '" + name + "' (expected exp_neg_l2sq, sin_pairing or const)") {}

}  // namespace spdeac
