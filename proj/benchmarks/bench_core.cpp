// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "spdeac/energy.hpp"
#include "spdeac/fft.hpp"
#include "spdeac/grid.hpp"
#include "spdeac/integrator.hpp"
#include "spdeac/noise.hpp"
#include "spdeac/oracles.hpp"
#include "spdeac/resolvent.hpp"
#include "spdeac/spectral.hpp"

namespace {

using namespace spdeac;

void BM_ComplexFft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::complex<double>> x(n, {1.0, 0.5});
  const auto& plan = fft::plan_for(n);
  for (auto _ : state) {
    plan.execute(x, fft::Direction::Forward);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_ComplexFft)->RangeMultiplier(4)->Range(16, 4096);

void BM_ForwardTransform(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto f = random_smooth_field(g, 1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(forward_transform(f));
}
BENCHMARK(BM_ForwardTransform)->Args({1, 64})->Args({1, 1024})->Args({2, 32})->Args({2, 128})->Args({3, 16});

void BM_DealiasedCubic(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto u = random_smooth_field(g, 2, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nonlinearity_f(u));
}
BENCHMARK(BM_DealiasedCubic)->Args({1, 64})->Args({2, 32});

void BM_SolveTTau(benchmark::State& state) {
  const GridSpec g(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto rhs = random_smooth_field(g, 3, 1.5);
  SolverConfig cfg;
  cfg.method = state.range(2) == 0 ? SolverMethod::FixedPoint : SolverMethod::Newton;
  for (auto _ : state) benchmark::DoNotOptimize(solve_t_tau(rhs, 1.0 / 32, cfg));
}
BENCHMARK(BM_SolveTTau)->Args({1, 64, 0})->Args({1, 64, 1})->Args({2, 32, 0})->Args({2, 32, 1});

// One coupled sample of the additive strong study at the finest ladder step.
void BM_ImplicitTrajectory(benchmark::State& state) {
  const GridSpec g(1, 64);
  NoiseSpec noise;
  noise.num_modes = 8;
  noise.amplitude = 0.5;
  SchemeConfig cfg;
  cfg.tau = 0.5 / 512;
  cfg.num_steps = 512;
  const auto u0 = initial_condition(g, InitialPreset::Sin);
  const auto path = sample_path(7, 8, cfg.tau, cfg.num_steps);
  for (auto _ : state) benchmark::DoNotOptimize(march(cfg, u0, noise, path));
}
BENCHMARK(BM_ImplicitTrajectory)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
