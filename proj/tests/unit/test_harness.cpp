// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <sstream>

#include "spdeac/errors.hpp"
#include "spdeac/harness.hpp"
#include "spdeac/spectral.hpp"

namespace spdeac {
namespace {

ErrorTable synthetic(const std::vector<double>& taus, const std::function<double(double)>& err) {
  ErrorTable t;
  for (double tau : taus) t.rows.push_back({tau, err(tau), 0.0, 100});
  return t;
}

const std::vector<double> kLadder{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512};

ExperimentSpec small_spec(double amplitude) {
  ExperimentSpec s;
  s.grid = GridSpec(1, 32);
  s.noise.variant = NoiseVariant::Additive;
  s.noise.num_modes = 4;
  s.noise.amplitude = amplitude;
  s.horizon = 0.5;
  s.ladder_levels = {3, 4, 5};
  s.reference_level = 8;
  s.num_samples = 4;
  s.seed = 11;
  return s;
}

TEST(FitRate, ExactFirstOrderTable) {
  const auto fit = fit_rate(synthetic(kLadder, [](double t) { return t; }));
  EXPECT_NEAR(fit.slope, 1.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_LE(fit.ci_low, fit.slope);
  EXPECT_GE(fit.ci_high, fit.slope);
  EXPECT_EQ(fit.rows_used.size(), kLadder.size());
}

TEST(FitRate, ExactHalfOrderTable) {
  const auto fit = fit_rate(synthetic(kLadder, [](double t) { return 5.0 * std::sqrt(t); }));
  EXPECT_NEAR(fit.slope, 0.5, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log2(5.0), 1e-12);
}

TEST(FitRate, NoisyFirstOrderTable) {
  std::mt19937 gen(4);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int trial = 0; trial < 20; ++trial) {
    const auto fit = fit_rate(synthetic(kLadder, [&](double t) { return 3 * t * (1 + noise(gen)); }));
    EXPECT_GE(fit.slope, 0.97);
    EXPECT_LE(fit.slope, 1.03);
  }
}

TEST(FitRate, DegenerateTables) {
  EXPECT_THROW(fit_rate(synthetic({0.1, 0.05}, [](double t) { return t; })), DegenerateTable);
  EXPECT_THROW(fit_rate(synthetic(kLadder, [](double t) { return t < 0.01 ? 0.0 : t; })),
               DegenerateTable);
  EXPECT_THROW(fit_rate(synthetic(kLadder, [](double t) { return t < 0.01 ? std::nan("") : t; })),
               DegenerateTable);
  auto noisy = synthetic(kLadder, [](double t) { return t; });
  for (std::size_t i = 0; i < 4; ++i) noisy.rows[i].std_error = noisy.rows[i].error;
  FitOptions opts;
  opts.max_relative_se = 0.25;
  EXPECT_THROW(fit_rate(noisy, opts), DegenerateTable);
}

TEST(FitRate, NoiseFilterExcludesRows) {
  auto t = synthetic(kLadder, [](double tau) { return tau; });
  t.rows[5].error *= 10;  // outlier, but flagged as noisy
  t.rows[5].std_error = t.rows[5].error;
  FitOptions opts;
  opts.max_relative_se = 0.25;
  const auto fit = fit_rate(t, opts);
  EXPECT_NEAR(fit.slope, 1.0, 1e-12);
  EXPECT_EQ(fit.rows_excluded, std::vector<std::size_t>{5});
  EXPECT_EQ(t.noisy_rows(0.25), std::vector<std::size_t>{5});
}

TEST(ErrorTable, MonotonicityFlags) {
  auto t = synthetic(kLadder, [](double tau) { return tau; });
  t.rows[2].error = 1.0;  // larger than the coarser row 1
  const auto v = t.monotonicity_violations();
  EXPECT_FALSE(v.empty());
  t.rows[2].std_error = 1.0;
  EXPECT_TRUE(t.monotonicity_violations().empty());
  EXPECT_TRUE(synthetic(kLadder, [](double tau) { return tau; }).monotonicity_violations().empty());
}

TEST(Functionals, Examples) {
  const GridSpec g(1, 64);
  const auto u = ScalarField::from_function(g, [](const auto& x) { return std::cos(x[0]); });
  EXPECT_EQ(eval_functional(FunctionalKind::Const, u), 1.0);
  EXPECT_EQ(eval_functional(FunctionalKind::ExpNegL2Sq, ScalarField(g)), 1.0);
  // <cos, cos> = pi by quadrature and analytically.
  EXPECT_NEAR(l2_inner(u, u), kPi, 1e-13);
  EXPECT_NEAR(eval_functional(FunctionalKind::SinPairing, u), std::sin(kPi), 1e-12);
  EXPECT_NEAR(eval_functional("exp_neg_l2sq", u), std::exp(-kPi), 1e-14);
  EXPECT_EQ(parse_functional("sin_pairing"), FunctionalKind::SinPairing);
  EXPECT_EQ(to_string(parse_functional("const")), "const");
  EXPECT_THROW(parse_functional("max_norm"), UnknownFunctional);
  EXPECT_THROW(eval_functional("bogus", u), UnknownFunctional);
}

TEST(ErrorKinds, NamesRoundTrip) {
  for (auto k : {ErrorKind::StrongL2AtT, ErrorKind::StrongMaxL2, ErrorKind::StrongH1Sum,
                 ErrorKind::WeakFunctional}) {
    EXPECT_EQ(parse_error_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_error_kind("strong"), InvalidArgument);
}

TEST(ExperimentSpec, Validation) {
  auto s = small_spec(0.5);
  EXPECT_NO_THROW(s.validate(true));
  EXPECT_DOUBLE_EQ(s.tau(3), 0.5 / 8);
  s.num_samples = 1;
  EXPECT_THROW(s.validate(), InvalidArgument);
  s = small_spec(0.5);
  s.reference_level = 6;
  EXPECT_NO_THROW(s.validate());
  EXPECT_THROW(s.validate(true), InvalidArgument);
  s.reference_level = 4;
  EXPECT_THROW(s.validate(), InvalidArgument);
  s = small_spec(0.5);
  s.ladder_levels = {4, 3, 5};
  EXPECT_THROW(s.validate(), InvalidArgument);
  s = small_spec(0.5);
  s.horizon = 1.0;
  s.ladder_levels = {0, 1, 2};
  EXPECT_THROW(s.validate(), InvalidArgument);
  s.horizon = -1.0;
  EXPECT_THROW(s.validate(), InvalidArgument);
}

TEST(StrongStudy, ZeroNoiseIsDeterministicFirstOrder) {
  auto s = small_spec(0.0);
  s.ladder_levels = {3, 4, 5};
  s.reference_level = 10;
  s.num_samples = 3;
  const auto t = strong_error_study(s);
  ASSERT_EQ(t.rows.size(), 3u);
  for (const auto& row : t.rows) {
    EXPECT_GT(row.error, 0.0);
    EXPECT_LE(row.std_error, 1e-12 * row.error);
  }
  // Every sample sees the same trajectory.
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::size_t len = t.series_length[r];
    for (std::size_t i = 1; i < s.num_samples; ++i) {
      for (std::size_t j = 0; j < len; ++j) EXPECT_EQ(t.samples[r][i * len + j], t.samples[r][j]);
    }
  }
  for (std::size_t r = 0; r + 1 < t.rows.size(); ++r) {
    const double ratio = t.rows[r].error / t.rows[r + 1].error;
    EXPECT_GT(ratio, 1.8);
    EXPECT_LT(ratio, 2.2);
  }
}

TEST(StrongStudy, ReferenceLevelInLadderGivesZero) {
  for (auto kind : {ErrorKind::StrongL2AtT, ErrorKind::StrongMaxL2, ErrorKind::StrongH1Sum}) {
    auto s = small_spec(1.0);
    s.ladder_levels = {3, 4, 6};
    s.reference_level = 6;
    s.error_kind = kind;
    const auto t = strong_error_study(s);
    EXPECT_EQ(t.rows.back().error, 0.0) << to_string(kind);
    EXPECT_GT(t.rows.front().error, t.rows[1].error);
    EXPECT_THROW(fit_rate(t), DegenerateTable);
  }
}

TEST(StrongStudy, ErrorKindsAreOrdered) {
  auto s = small_spec(1.0);
  s.error_kind = ErrorKind::StrongL2AtT;
  const auto at_t = strong_error_study(s);
  s.error_kind = ErrorKind::StrongMaxL2;
  const auto max_l2 = strong_error_study(s);
  s.error_kind = ErrorKind::StrongH1Sum;
  const auto h1 = strong_error_study(s);
  for (std::size_t r = 0; r < at_t.rows.size(); ++r) {
    EXPECT_GE(max_l2.rows[r].error, at_t.rows[r].error * (1 - 1e-12));
    EXPECT_GE(h1.rows[r].error, max_l2.rows[r].error * (1 - 1e-12));
  }
}

TEST(StrongStudy, RowEstimateReproducesRow) {
  auto s = small_spec(1.0);
  s.error_kind = ErrorKind::StrongMaxL2;
  const auto t = strong_error_study(s);
  std::vector<std::size_t> all(s.num_samples);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    EXPECT_NEAR(row_estimate(t, r, all), t.rows[r].error, 1e-14);
  }
}

TEST(StrongStudy, ThreadCountDoesNotChangeResults) {
  auto s = small_spec(1.0);
  s.num_samples = 6;
  const auto serial = strong_error_study(s);
  s.jobs = 3;
  const auto threaded = strong_error_study(s);
  for (std::size_t r = 0; r < serial.rows.size(); ++r) {
    EXPECT_EQ(serial.rows[r].error, threaded.rows[r].error);
    EXPECT_EQ(serial.rows[r].std_error, threaded.rows[r].std_error);
    EXPECT_EQ(serial.samples[r], threaded.samples[r]);
  }
  EXPECT_EQ(serial.spec_hash, threaded.spec_hash);
}

TEST(StrongStudy, DoublingSamplesStaysWithinThreePooledErrors) {
  auto s = small_spec(1.0);
  s.num_samples = 16;
  const auto half = strong_error_study(s);
  s.num_samples = 32;
  const auto all = strong_error_study(s);
  for (std::size_t r = 0; r < half.rows.size(); ++r) {
    const double pooled = std::hypot(half.rows[r].std_error, all.rows[r].std_error);
    EXPECT_LT(std::abs(half.rows[r].error - all.rows[r].error), 3 * pooled) << r;
  }
}

TEST(StrongStudy, SolverFailureNamesSample) {
  auto s = small_spec(2.0);
  s.solver.tol_residual = 1e-16;
  s.solver.max_iter = 2;
  try {
    strong_error_study(s);
    FAIL() << "expected NoConvergence";
  } catch (const NoConvergence& e) {
    EXPECT_EQ(e.context().rfind("sample 0", 0), 0u) << e.context();
  }
}

TEST(WeakStudy, ConstantFunctionalAndSelfComparison) {
  auto s = small_spec(1.0);
  s.noise.variant = NoiseVariant::Affine;
  s.error_kind = ErrorKind::WeakFunctional;
  s.functional = FunctionalKind::Const;
  for (const auto& row : weak_error_study(s).rows) EXPECT_EQ(row.error, 0.0);
  s.functional = FunctionalKind::ExpNegL2Sq;
  s.ladder_levels = {3, 4, 6};
  s.reference_level = 6;
  const auto t = weak_error_study(s);
  EXPECT_EQ(t.rows.back().error, 0.0);
  EXPECT_GT(t.rows.front().error, 0.0);
  EXPECT_EQ(t.series_length.front(), 1u);
}

TEST(Doubling, SyntheticValues) {
  std::vector<double> v{1, 2, 3, 4, 1, 2, 3, 4};
  const auto d = doubling_check(v);
  EXPECT_DOUBLE_EQ(d.half.mean, 2.5);
  EXPECT_DOUBLE_EQ(d.all.mean, 2.5);
  EXPECT_EQ(d.change_in_se, 0.0);
  // sd of {1,2,3,4} is sqrt(5/3)
  EXPECT_NEAR(d.half.std_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-14);
}

TEST(Monitor, ZeroNoiseSamplesAgree) {
  MonitorSpec m;
  m.grid = GridSpec(1, 32);
  m.noise.num_modes = 2;
  m.noise.amplitude = 0.0;
  m.scheme.tau = 1.0 / 16;
  m.scheme.num_steps = 8;
  m.num_samples = 4;
  const auto mon = energy_moment_monitor(m);
  EXPECT_EQ(mon.solver_failures, 0u);
  ASSERT_EQ(mon.max_energy.size(), 4u);
  EXPECT_NEAR(mon.max_energy[0], kPi / 2 + 3 * kPi / 16, 1e-12);
  for (double v : mon.max_energy) EXPECT_EQ(v, mon.max_energy[0]);
  const auto mean = mon.max_energy_mean(4);
  EXPECT_EQ(mean.std_error, 0.0);
  std::ostringstream os;
  write_moment_csv(os, mon);
  EXPECT_EQ(os.str().rfind("sample,max_energy,dissipation_sum\n", 0), 0u);
}

TEST(Monitor, RejectsLargeStep) {
  MonitorSpec m;
  m.scheme.tau = 0.3;
  EXPECT_THROW(energy_moment_monitor(m), InvalidArgument);
}

TEST(Output, CsvHashAndMetadata) {
  auto s = small_spec(1.0);
  const auto t = strong_error_study(s);
  std::ostringstream csv;
  write_error_table_csv(csv, t);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "tau,error,std_error,n_samples");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);

  EXPECT_EQ(experiment_hash(s), t.spec_hash);
  EXPECT_EQ(experiment_hash(s).size(), 16u);
  auto other = s;
  other.seed += 1;
  EXPECT_NE(experiment_hash(other), experiment_hash(s));
  other = s;
  other.jobs = 4;
  EXPECT_EQ(experiment_hash(other), experiment_hash(s));

  const auto fit = fit_rate(t);
  std::ostringstream meta;
  write_study_metadata(meta, s, t, &fit);
  for (const char* key : {"\"experiment\"", "\"spec_hash\"", "\"seed\"", "\"git_describe\"", "\"fit\""}) {
    EXPECT_NE(meta.str().find(key), std::string::npos) << key;
  }
  EXPECT_FALSE(build_description().empty());
}

TEST(ParallelFor, VisitsEveryIndexAndRethrowsLowestFailure) {
  std::vector<int> hits(50, 0);
  parallel_for(50, 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  std::atomic<std::size_t> done{0};
  try {
    parallel_for(20, 3, [&](std::size_t i) {
      ++done;
      if (i == 7 || i == 13) throw InvalidArgument("index " + std::to_string(i));
    });
    FAIL() << "expected a rethrow";
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "index 7");
  }
  std::size_t last_done = 0;
  parallel_for(5, 1, [](std::size_t) {}, [&](std::size_t d, std::size_t total) {
    EXPECT_EQ(total, 5u);
    last_done = std::max(last_done, d);
  });
  EXPECT_EQ(last_done, 5u);
}

}  // namespace
}  // namespace spdeac
