// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "spdeac/grid.hpp"
#include "spdeac/integrator.hpp"
#include "spdeac/noise.hpp"
#include "spdeac/resolvent.hpp"

namespace spdeac {

enum class ErrorKind {
  StrongL2AtT,   ///< sqrt(E ||u^tau_M - u^ref(T)||^2)
  StrongMaxL2,   ///< sqrt(max_m E ||e_m||^2)
  StrongH1Sum,   ///< sqrt(max_m E [||e_m||^2 + sum_{n<=m} tau ||grad e_n||^2])
  WeakFunctional,
};

std::string to_string(ErrorKind k);
ErrorKind parse_error_kind(const std::string& name);

/// Bounded smooth test functionals on L^2.
enum class FunctionalKind {
  ExpNegL2Sq,  ///< exp(-||u||^2)
  SinPairing,  ///< sin(<u, cos x_1>)
  Const,       ///< 1
};

/// Throws UnknownFunctional.
FunctionalKind parse_functional(const std::string& name);
std::string to_string(FunctionalKind k);
double eval_functional(FunctionalKind kind, const ScalarField& u);
double eval_functional(const std::string& name, const ScalarField& u);

/// A Monte Carlo convergence study on a power-of-two ladder of steps tau = T 2^{-level}.
struct ExperimentSpec {
  GridSpec grid{1, 64};
  NoiseSpec noise{};
  InitialPreset initial = InitialPreset::Sin;
  double initial_value = 1.0;
  double horizon = 0.5;
  std::vector<int> ladder_levels{4, 5, 6, 7, 8, 9};
  int reference_level = 12;
  std::size_t num_samples = 100;
  std::uint64_t seed = 1;
  ErrorKind error_kind = ErrorKind::StrongL2AtT;
  FunctionalKind functional = FunctionalKind::ExpNegL2Sq;
  SchemeVariant variant = SchemeVariant::Implicit;
  SolverConfig solver{};
  unsigned jobs = 1;

  double tau(int level) const;
  /// Throws InvalidArgument. The reference must be at least as fine as every ladder entry;
  /// with `require_reference_margin` it must be at least 8x finer than the finest entry.
  void validate(bool require_reference_margin = false) const;
};

struct ErrorRow {
  double tau = 0.0;
  double error = 0.0;
  double std_error = 0.0;
  std::size_t num_samples = 0;
};

/// Per-tau error estimates, rows sorted by tau descending.
struct ErrorTable {
  std::vector<ErrorRow> rows;
  std::string spec_hash;
  std::uint64_t seed = 0;
  ErrorKind kind = ErrorKind::StrongL2AtT;

  /// Per-row sample data for resampling: num_samples x series_length values, sample-major.
  /// Strong kinds hold per-time squared-error accumulators, the weak kind the differences
  /// phi(u^tau) - phi(u^ref) (series length 1). Empty for synthetic tables.
  std::vector<std::vector<double>> samples;
  std::vector<std::size_t> series_length;

  /// Rows whose std_error exceeds `max_relative_se` times their estimate.
  std::vector<std::size_t> noisy_rows(double max_relative_se = 0.25) const;
  /// Rows where the error drops when tau grows, ignoring noisy rows.
  std::vector<std::size_t> monotonicity_violations(double max_relative_se = 0.25) const;
};

/// Recomputes a row estimate from a multiset of sample indices.
double row_estimate(const ErrorTable& table, std::size_t row, const std::vector<std::size_t>& picks);

struct FitOptions {
  int bootstrap_resamples = 1000;
  std::uint64_t seed = 0x5eed;
  /// Rows whose std_error exceeds this fraction of the estimate are left out of the fit.
  double max_relative_se = std::numeric_limits<double>::infinity();
  std::size_t min_rows = 3;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double ci_low = 0.0;  ///< 95% bootstrap interval on the slope
  double ci_high = 0.0;
  std::vector<std::size_t> rows_used;
  std::vector<std::size_t> rows_excluded;
};

/// Least squares of log2(error) on log2(tau). Throws DegenerateTable on a zero or
/// non-finite row, or when fewer than min_rows survive the noise filter.
RateFit fit_rate(const ErrorTable& table, const FitOptions& options = {});

/// Progress hook: (samples finished, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

ErrorTable strong_error_study(const ExperimentSpec& spec, const ProgressFn& progress = {});
ErrorTable weak_error_study(const ExperimentSpec& spec, const ProgressFn& progress = {});

/// Sample mean and its standard error.
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Inputs of the energy-moment monitor.
struct MonitorSpec {
  GridSpec grid{1, 64};
  NoiseSpec noise{};
  InitialPreset initial = InitialPreset::Sin;
  double initial_value = 1.0;
  SchemeConfig scheme{};
  std::size_t num_samples = 100;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

/// Monte Carlo shadow of the moment bounds: per-sample max_m E(u_m) and tau sum ||DE(u_m)||^2.
/// Sample i uses the same path seed as sample i of a rate study.
struct MomentMonitor {
  std::vector<double> max_energy;
  std::vector<double> dissipation_sum;
  std::size_t solver_failures = 0;  ///< failed samples hold NaN and are skipped by the means

  MeanEstimate max_energy_mean(std::size_t first_n) const;
  MeanEstimate dissipation_mean(std::size_t first_n) const;
};
MomentMonitor energy_moment_monitor(const MonitorSpec& spec, const ProgressFn& progress = {});

/// Doubling-N stability: change of the mean between the first half and all samples, in units
/// of the pooled standard error sqrt(se_half^2 + se_all^2).
struct DoublingCheck {
  MeanEstimate half;
  MeanEstimate all;
  double change_in_se = 0.0;
};
DoublingCheck doubling_check(const std::vector<double>& values);

/// CSV header sample,max_energy,dissipation_sum.
void write_moment_csv(std::ostream& os, const MomentMonitor& monitor);

/// CSV header tau,error,std_error,n_samples.
void write_error_table_csv(std::ostream& os, const ErrorTable& table);
/// Structured metadata companion: the full experiment spec, seed and build description.
void write_study_metadata(std::ostream& os, const ExperimentSpec& spec, const ErrorTable& table,
                          const RateFit* fit);
/// Stable hash of the experiment parameters.
std::string experiment_hash(const ExperimentSpec& spec);
std::string build_description();

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Results must be written to
/// per-index slots. The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn,
                  const ProgressFn& progress = {});

}  // namespace spdeac
