// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spdeac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad grid size, tau out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A negative power of A was requested on a field with a nonzero mean.
class NegativePowerOnConstantMode : public Error {
 public:
  explicit NegativePowerOnConstantMode(double magnitude);
  double magnitude() const noexcept { return magnitude_; }

 private:
  double magnitude_;
};

/// The nonlinear or linear solver exhausted its iteration budget.
class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double residual, const std::string& context = {});
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }
  const std::string& context() const noexcept { return context_; }

 private:
  int iterations_;
  double residual_;
  std::string context_;
};

/// Coarsening factor does not divide the number of steps (or is not a power of two).
class FactorMismatch : public Error {
 public:
  FactorMismatch(std::size_t factor, std::size_t num_steps);
};

/// The deterministic discrete energy inequality failed at some step.
class InequalityViolated : public Error {
 public:
  InequalityViolated(std::size_t step, double lhs, double rhs);
  std::size_t step() const noexcept { return step_; }
  double lhs() const noexcept { return lhs_; }
  double rhs() const noexcept { return rhs_; }

 private:
  std::size_t step_;
  double lhs_;
  double rhs_;
};

class UnknownFunctional : public Error {
 public:
  explicit UnknownFunctional(const std::string& name);
};

/// Rate fit impossible: too few rows, or a zero / non-finite error estimate.
class DegenerateTable : public Error {
 public:
  using Error::Error;
};

}  // namespace spdeac
