// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "spdeac/errors.hpp"
#include "spdeac/format.hpp"
#include "spdeac/philox.hpp"
#include "spdeac/spectral.hpp"

#ifndef SPDEAC_GIT_DESCRIBE
#define SPDEAC_GIT_DESCRIBE "unknown"
#endif

namespace spdeac {

std::string to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::StrongL2AtT: return "strong_l2_at_t";
    case ErrorKind::StrongMaxL2: return "strong_max_l2";
    case ErrorKind::StrongH1Sum: return "strong_h1_sum";
    case ErrorKind::WeakFunctional: return "weak_functional";
  }
  return "?";
}

ErrorKind parse_error_kind(const std::string& name) {
  for (ErrorKind k : {ErrorKind::StrongL2AtT, ErrorKind::StrongMaxL2, ErrorKind::StrongH1Sum,
                      ErrorKind::WeakFunctional}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown error kind '" + name +
                        "' (expected strong_l2_at_t, strong_max_l2, strong_h1_sum, weak_functional)");
}

FunctionalKind parse_functional(const std::string& name) {
  if (name == "exp_neg_l2sq") return FunctionalKind::ExpNegL2Sq;
  if (name == "sin_pairing") return FunctionalKind::SinPairing;
  if (name == "const") return FunctionalKind::Const;
  throw UnknownFunctional(name);
}

std::string to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::ExpNegL2Sq: return "exp_neg_l2sq";
    case FunctionalKind::SinPairing: return "sin_pairing";
    case FunctionalKind::Const: return "const";
  }
  return "?";
}

double eval_functional(FunctionalKind kind, const ScalarField& u) {
  switch (kind) {
    case FunctionalKind::ExpNegL2Sq: {
      const double n = l2_norm(u);
      return std::exp(-n * n);
    }
    case FunctionalKind::SinPairing: {
      const ScalarField psi =
          ScalarField::from_function(u.grid(), [](const std::array<double, 3>& x) { return std::cos(x[0]); });
      return std::sin(l2_inner(u, psi));
    }
    case FunctionalKind::Const: return 1.0;
  }
  return 0.0;
}

double eval_functional(const std::string& name, const ScalarField& u) {
  return eval_functional(parse_functional(name), u);
}

// ---------------------------------------------------------------------------

double ExperimentSpec::tau(int level) const { return std::ldexp(horizon, -level); }

void ExperimentSpec::validate(bool require_reference_margin) const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("T = " + format_double(horizon) + " must be positive");
  }
  if (ladder_levels.empty()) throw InvalidArgument("the ladder must not be empty");
  if (num_samples < 2) {
    throw InvalidArgument("samples N = " + std::to_string(num_samples) + " must be at least 2");
  }
  const int finest = *std::max_element(ladder_levels.begin(), ladder_levels.end());
  for (std::size_t i = 0; i < ladder_levels.size(); ++i) {
    const int level = ladder_levels[i];
    if (level < 0 || level > 24) {
      throw InvalidArgument("ladder level " + std::to_string(level) + " must lie in [0, 24]");
    }
    if (i > 0 && level <= ladder_levels[i - 1]) {
      throw InvalidArgument("ladder levels must be strictly increasing (tau descending)");
    }
    if (!(tau(level) < 0.5)) {
      throw InvalidArgument("ladder tau = " + format_double(tau(level)) + " violates the rule tau < 1/2");
    }
  }
  if (reference_level > 24) throw InvalidArgument("reference level must not exceed 24");
  if (reference_level < finest) {
    throw InvalidArgument("reference level " + std::to_string(reference_level) +
                          " is coarser than the finest ladder level " + std::to_string(finest));
  }
  if (require_reference_margin && reference_level < finest + 3) {
    throw InvalidArgument("reference level " + std::to_string(reference_level) +
                          " must be at least 8x finer than the finest ladder level " +
                          std::to_string(finest));
  }
  if (error_kind == ErrorKind::WeakFunctional && variant == SchemeVariant::TransformedAdditive &&
      noise.variant != NoiseVariant::Additive) {
    throw InvalidArgument("the transformed scheme requires additive noise");
  }
  solver.validate();
}

// ---------------------------------------------------------------------------

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn,
                  const ProgressFn& progress) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(jobs, count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mutex;
  std::size_t done = 0;
  std::size_t failed_index = count;
  std::exception_ptr failure;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
        failed.store(true);
        return;
      }
      if (progress) {
        std::lock_guard lock(mutex);
        progress(++done, count);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

namespace {

std::size_t series_length_for(ErrorKind kind, int level) {
  if (kind == ErrorKind::StrongMaxL2 || kind == ErrorKind::StrongH1Sum) {
    return std::size_t{1} << level;
  }
  return 1;
}

bool is_strong(ErrorKind kind) { return kind != ErrorKind::WeakFunctional; }

/// Mean over `picks` of the column `l` of a sample-major block.
double column_mean(const std::vector<double>& data, std::size_t len, std::size_t l,
                   const std::vector<std::size_t>& picks) {
  double sum = 0.0;
  for (std::size_t i : picks) sum += data[i * len + l];
  return sum / static_cast<double>(picks.size());
}

double column_mean_all(const std::vector<double>& data, std::size_t len, std::size_t l, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += data[i * len + l];
  return sum / static_cast<double>(n);
}

double column_variance(const std::vector<double>& data, std::size_t len, std::size_t l, std::size_t n,
                       double mean) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = data[i * len + l] - mean;
    sum += d * d;
  }
  return sum / static_cast<double>(n - 1);
}

std::size_t argmax_column(const std::vector<double>& data, std::size_t len, std::size_t n) {
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t l = 0; l < len; ++l) {
    const double m = column_mean_all(data, len, l, n);
    if (m > best_value) {
      best_value = m;
      best = l;
    }
  }
  return best;
}

[[noreturn]] void rethrow_with_context(std::size_t sample, double tau) {
  const std::string where = "sample " + std::to_string(sample) + ", tau " + format_double(tau);
  try {
    throw;
  } catch (const NoConvergence& e) {
    std::string context = where;
    if (!e.context().empty()) context += ", " + e.context();
    throw NoConvergence(e.iterations(), e.residual(), context);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(where + ": " + e.what());
  }
}

ErrorTable make_table(const ExperimentSpec& spec) {
  ErrorTable table;
  table.kind = spec.error_kind;
  table.seed = spec.seed;
  table.spec_hash = experiment_hash(spec);
  table.rows.resize(spec.ladder_levels.size());
  table.samples.resize(spec.ladder_levels.size());
  table.series_length.resize(spec.ladder_levels.size());
  for (std::size_t r = 0; r < spec.ladder_levels.size(); ++r) {
    const int level = spec.ladder_levels[r];
    table.rows[r].tau = spec.tau(level);
    table.rows[r].num_samples = spec.num_samples;
    table.series_length[r] = series_length_for(spec.error_kind, level);
    table.samples[r].assign(spec.num_samples * table.series_length[r], 0.0);
  }
  return table;
}

void finalize_rows(ErrorTable& table) {
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    ErrorRow& row = table.rows[r];
    const std::size_t n = row.num_samples;
    const std::size_t len = table.series_length[r];
    const auto& data = table.samples[r];
    if (is_strong(table.kind)) {
      const std::size_t l = argmax_column(data, len, n);
      const double mean = column_mean_all(data, len, l, n);
      const double se_squared = std::sqrt(column_variance(data, len, l, n, mean) / static_cast<double>(n));
      row.error = std::sqrt(std::max(mean, 0.0));
      // delta method for the square root
      row.std_error = row.error > 0.0 ? se_squared / (2.0 * row.error) : 0.0;
    } else {
      const double mean = column_mean_all(data, 1, 0, n);
      row.error = std::abs(mean);
      row.std_error = std::sqrt(column_variance(data, 1, 0, n, mean) / static_cast<double>(n));
    }
  }
}

SchemeConfig scheme_for(const ExperimentSpec& spec, int level) {
  SchemeConfig cfg;
  cfg.tau = spec.tau(level);
  cfg.num_steps = std::size_t{1} << level;
  cfg.variant = spec.variant;
  cfg.solver = spec.solver;
  return cfg;
}

}  // namespace

std::vector<std::size_t> ErrorTable::noisy_rows(double max_relative_se) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].std_error > max_relative_se * rows[r].error) out.push_back(r);
  }
  return out;
}

std::vector<std::size_t> ErrorTable::monotonicity_violations(double max_relative_se) const {
  const auto noisy = noisy_rows(max_relative_se);
  auto is_noisy = [&](std::size_t r) { return std::find(noisy.begin(), noisy.end(), r) != noisy.end(); };
  std::vector<std::size_t> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (is_noisy(r) || is_noisy(r - 1)) continue;
    if (rows[r].error > rows[r - 1].error) out.push_back(r);
  }
  return out;
}

double row_estimate(const ErrorTable& table, std::size_t row, const std::vector<std::size_t>& picks) {
  if (row >= table.samples.size() || picks.empty()) {
    throw InvalidArgument("row_estimate needs per-sample data and a nonempty pick list");
  }
  const auto& data = table.samples[row];
  const std::size_t len = table.series_length[row];
  if (is_strong(table.kind)) {
    double best = 0.0;
    for (std::size_t l = 0; l < len; ++l) best = std::max(best, column_mean(data, len, l, picks));
    return std::sqrt(best);
  }
  return std::abs(column_mean(data, 1, 0, picks));
}

// ---------------------------------------------------------------------------

namespace {

struct LineFit {
  double slope, intercept, r_squared, slope_se;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit{};
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double res = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += res * res;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  fit.slope_se = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  return fit;
}

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

}  // namespace

RateFit fit_rate(const ErrorTable& table, const FitOptions& options) {
  if (table.rows.empty()) throw DegenerateTable("error table has no rows");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const ErrorRow& row = table.rows[r];
    if (!std::isfinite(row.error) || !(row.error > 0.0) || !(row.tau > 0.0)) {
      throw DegenerateTable("row " + std::to_string(r) + " (tau " + format_double(row.tau) +
                            ") has error " + format_double(row.error) + "; a rate fit needs positive finite errors");
    }
  }
  RateFit out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const ErrorRow& row = table.rows[r];
    if (row.std_error > options.max_relative_se * row.error) {
      out.rows_excluded.push_back(r);
    } else {
      out.rows_used.push_back(r);
    }
  }
  if (out.rows_used.size() < std::max<std::size_t>(options.min_rows, 2)) {
    throw DegenerateTable("only " + std::to_string(out.rows_used.size()) + " rows available for the fit, need " +
                          std::to_string(std::max<std::size_t>(options.min_rows, 2)));
  }
  std::vector<double> x, y;
  for (std::size_t r : out.rows_used) {
    x.push_back(std::log2(table.rows[r].tau));
    y.push_back(std::log2(table.rows[r].error));
  }
  const LineFit fit = least_squares(x, y);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.r_squared = fit.r_squared;
  if (!std::isfinite(out.slope)) throw DegenerateTable("fitted slope is not finite");

  std::vector<double> slopes;
  const bool resample = !table.samples.empty() && options.bootstrap_resamples > 0;
  if (resample) {
    const std::size_t n = table.rows.front().num_samples;
    // Strong rows with a time series are resampled at the time that maximizes the full-sample mean.
    std::vector<std::size_t> peak(table.rows.size(), 0);
    for (std::size_t r : out.rows_used) {
      peak[r] = argmax_column(table.samples[r], table.series_length[r], n);
    }
    std::vector<std::size_t> picks(n);
    std::vector<double> yb(x.size());
    slopes.reserve(static_cast<std::size_t>(options.bootstrap_resamples));
    for (int b = 0; b < options.bootstrap_resamples; ++b) {
      const std::uint64_t stream = mix_seed(options.seed, static_cast<std::uint64_t>(b));
      for (std::size_t i = 0; i < n; ++i) picks[i] = mix_seed(stream, i) % n;
      bool ok = true;
      for (std::size_t j = 0; j < out.rows_used.size(); ++j) {
        const std::size_t r = out.rows_used[j];
        const double m = column_mean(table.samples[r], table.series_length[r], peak[r], picks);
        const double e = is_strong(table.kind) ? std::sqrt(std::max(m, 0.0)) : std::abs(m);
        if (!(e > 0.0) || !std::isfinite(e)) {
          ok = false;
          break;
        }
        yb[j] = std::log2(e);
      }
      if (ok) slopes.push_back(least_squares(x, yb).slope);
    }
  }
  if (slopes.size() >= 20) {
    std::sort(slopes.begin(), slopes.end());
    out.ci_low = quantile_sorted(slopes, 0.025);
    out.ci_high = quantile_sorted(slopes, 0.975);
  } else {
    out.ci_low = out.slope - 1.96 * fit.slope_se;
    out.ci_high = out.slope + 1.96 * fit.slope_se;
  }
  out.ci_low = std::min(out.ci_low, out.slope);
  out.ci_high = std::max(out.ci_high, out.slope);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

ErrorTable run_study(const ExperimentSpec& spec, const ProgressFn& progress) {
  const int kmodes = resolved_noise_modes(spec.noise, spec.grid);
  const int finest = *std::max_element(spec.ladder_levels.begin(), spec.ladder_levels.end());
  const std::size_t ref_steps = std::size_t{1} << spec.reference_level;
  const std::size_t stride = std::size_t{1} << (spec.reference_level - finest);
  const ScalarField u0 = initial_condition(spec.grid, spec.initial, spec.initial_value);
  const bool strong = is_strong(spec.error_kind);

  ErrorTable table = make_table(spec);

  parallel_for(
      spec.num_samples, spec.jobs,
      [&](std::size_t i) {
        const std::uint64_t seed = mix_seed(spec.seed, i);
        const WienerPath path = sample_path(seed, kmodes, spec.tau(spec.reference_level), ref_steps);

        std::vector<ScalarField> reference;
        double phi_ref = 0.0;
        try {
          const SchemeConfig ref_cfg = scheme_for(spec, spec.reference_level);
          if (strong) {
            reference.reserve((std::size_t{1} << finest) + 1);
            march(ref_cfg, u0, spec.noise, path, [&](std::size_t m, const ScalarField& u) {
              if (m % stride == 0) reference.push_back(u);
            });
          } else {
            phi_ref = eval_functional(spec.functional, march(ref_cfg, u0, spec.noise, path));
          }
        } catch (...) {
          rethrow_with_context(i, spec.tau(spec.reference_level));
        }

        for (std::size_t r = 0; r < spec.ladder_levels.size(); ++r) {
          const int level = spec.ladder_levels[r];
          const SchemeConfig cfg = scheme_for(spec, level);
          const std::size_t len = table.series_length[r];
          double* slot = table.samples[r].data() + i * len;
          try {
            if (!strong) {
              slot[0] = eval_functional(spec.functional, march(cfg, u0, spec.noise, path)) - phi_ref;
              continue;
            }
            const std::size_t ratio = std::size_t{1} << (finest - level);
            double h1_acc = 0.0;
            march(cfg, u0, spec.noise, path, [&](std::size_t m, const ScalarField& u) {
              if (m == 0) return;
              ScalarField e = u;
              e -= reference[m * ratio];
              const double e2 = l2_norm(e);
              switch (spec.error_kind) {
                case ErrorKind::StrongL2AtT:
                  if (m == cfg.num_steps) slot[0] = e2 * e2;
                  break;
                case ErrorKind::StrongMaxL2:
                  slot[m - 1] = e2 * e2;
                  break;
                case ErrorKind::StrongH1Sum:
                  h1_acc += cfg.tau * gradient_norm_sq(e);
                  slot[m - 1] = e2 * e2 + h1_acc;
                  break;
                case ErrorKind::WeakFunctional:
                  break;
              }
            });
          } catch (...) {
            rethrow_with_context(i, cfg.tau);
          }
        }
      },
      progress);

  finalize_rows(table);
  return table;
}

}  // namespace

ErrorTable strong_error_study(const ExperimentSpec& spec, const ProgressFn& progress) {
  spec.validate();
  if (!is_strong(spec.error_kind)) {
    throw InvalidArgument("strong_error_study needs a strong error kind, got " + to_string(spec.error_kind));
  }
  return run_study(spec, progress);
}

ErrorTable weak_error_study(const ExperimentSpec& spec, const ProgressFn& progress) {
  ExperimentSpec weak = spec;
  weak.error_kind = ErrorKind::WeakFunctional;
  weak.validate();
  return run_study(weak, progress);
}

// ---------------------------------------------------------------------------

namespace {

MeanEstimate mean_of(const std::vector<double>& v, std::size_t first_n) {
  std::vector<double> xs;
  for (std::size_t i = 0; i < std::min(first_n, v.size()); ++i) {
    if (std::isfinite(v[i])) xs.push_back(v[i]);
  }
  MeanEstimate out;
  if (xs.empty()) return {std::nan(""), std::nan("")};
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return out;
}

}  // namespace

MeanEstimate MomentMonitor::max_energy_mean(std::size_t first_n) const { return mean_of(max_energy, first_n); }
MeanEstimate MomentMonitor::dissipation_mean(std::size_t first_n) const {
  return mean_of(dissipation_sum, first_n);
}

MomentMonitor energy_moment_monitor(const MonitorSpec& spec, const ProgressFn& progress) {
  if (spec.num_samples < 2) throw InvalidArgument("samples N must be at least 2");
  spec.scheme.validate(true);
  const int kmodes = resolved_noise_modes(spec.noise, spec.grid);
  const ScalarField u0 = initial_condition(spec.grid, spec.initial, spec.initial_value);

  MomentMonitor out;
  out.max_energy.assign(spec.num_samples, 0.0);
  out.dissipation_sum.assign(spec.num_samples, 0.0);
  std::vector<char> failed(spec.num_samples, 0);
  parallel_for(
      spec.num_samples, spec.jobs,
      [&](std::size_t i) {
        const WienerPath path =
            sample_path(mix_seed(spec.seed, i), kmodes, spec.scheme.tau, spec.scheme.num_steps);
        try {
          const TrajectoryRecord traj = run(spec.scheme, u0, spec.noise, path);
          const LedgerReport rep = energy_ledger_check(traj, spec.scheme.tau, LedgerMode::Statistical);
          out.max_energy[i] = rep.max_energy;
          out.dissipation_sum[i] = rep.dissipation_sum;
        } catch (const NoConvergence&) {
          failed[i] = 1;
          out.max_energy[i] = std::nan("");
          out.dissipation_sum[i] = std::nan("");
        }
      },
      progress);
  out.solver_failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  return out;
}

DoublingCheck doubling_check(const std::vector<double>& values) {
  DoublingCheck out;
  out.half = mean_of(values, values.size() / 2);
  out.all = mean_of(values, values.size());
  const double pooled = std::hypot(out.half.std_error, out.all.std_error);
  const double change = std::abs(out.all.mean - out.half.mean);
  out.change_in_se = pooled > 0.0 ? change / pooled : (change == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return out;
}

void write_moment_csv(std::ostream& os, const MomentMonitor& monitor) {
  os << "sample,max_energy,dissipation_sum\n";
  for (std::size_t i = 0; i < monitor.max_energy.size(); ++i) {
    os << i << ',' << format_double(monitor.max_energy[i]) << ',' << format_double(monitor.dissipation_sum[i])
       << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::ordered_json spec_json(const ExperimentSpec& spec) {
  nlohmann::ordered_json j;
  j["grid"] = {{"dim", spec.grid.dim()}, {"n", spec.grid.n()}};
  j["noise"] = {{"variant", to_string(spec.noise.variant)},
                {"num_modes", resolved_noise_modes(spec.noise, spec.grid)},
                {"decay", spec.noise.decay},
                {"amplitude", spec.noise.amplitude},
                {"profile", to_string(spec.noise.profile)}};
  j["initial"] = {{"preset", to_string(spec.initial)}, {"value", spec.initial_value}};
  j["T"] = spec.horizon;
  j["ladder_levels"] = spec.ladder_levels;
  std::vector<double> taus;
  for (int level : spec.ladder_levels) taus.push_back(spec.tau(level));
  j["ladder_tau"] = taus;
  j["ref_level"] = spec.reference_level;
  j["tau_ref"] = spec.tau(spec.reference_level);
  j["samples"] = spec.num_samples;
  j["seed"] = spec.seed;
  j["error_kind"] = to_string(spec.error_kind);
  if (spec.error_kind == ErrorKind::WeakFunctional) j["functional"] = to_string(spec.functional);
  j["scheme"] = to_string(spec.variant);
  j["solver"] = {{"tol", spec.solver.tol_residual},
                 {"max_iter", spec.solver.max_iter},
                 {"method", spec.solver.method == SolverMethod::Newton ? "newton" : "fixed_point"},
                 {"dealias", spec.solver.dealias}};
  return j;
}

}  // namespace

std::string experiment_hash(const ExperimentSpec& spec) {
  const std::string text = spec_json(spec).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

std::string build_description() { return SPDEAC_GIT_DESCRIBE; }

void write_error_table_csv(std::ostream& os, const ErrorTable& table) {
  os << "tau,error,std_error,n_samples\n";
  for (const ErrorRow& row : table.rows) {
    os << format_double(row.tau) << ',' << format_double(row.error) << ',' << format_double(row.std_error)
       << ',' << row.num_samples << '\n';
  }
}

void write_study_metadata(std::ostream& os, const ExperimentSpec& spec, const ErrorTable& table,
                          const RateFit* fit) {
  nlohmann::ordered_json j;
  j["experiment"] = spec_json(spec);
  j["spec_hash"] = table.spec_hash;
  j["seed"] = table.seed;
  j["git_describe"] = build_description();
  j["noisy_rows"] = table.noisy_rows();
  j["monotonicity_violations"] = table.monotonicity_violations();
  if (fit != nullptr) {
    j["fit"] = {{"slope", fit->slope},
                {"intercept", fit->intercept},
                {"r_squared", fit->r_squared},
                {"ci95", {fit->ci_low, fit->ci_high}},
                {"rows_used", fit->rows_used},
                {"rows_excluded", fit->rows_excluded}};
  }
  os << j.dump(2) << '\n';
}

}  // namespace spdeac
