// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spdeac_cli/commands.hpp"
#include "spdeac_cli/config.hpp"

namespace spdeac::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "spde-ac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("spdeac_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& body) {
    const auto p = dir_ / name;
    std::ofstream(p) << body;
    return p;
  }

  fs::path dir_;
};

const char* kZeroNoise =
    "grid.dim = 1\n"
    "grid.n = 32\n"
    "noise.amplitude = 0\n"
    "scheme.tau = 0.0625\n"
    "scheme.steps = 10\n";

const char* kSmallWeak =
    "grid.n = 16\n"
    "noise.variant = affine\n"
    "noise.modes = 2\n"
    "noise.amplitude = 0.5\n"
    "study.ladder = 2..4\n"
    "study.ref_level = 7\n"
    "run.samples = 2\n";

TEST(Config, ParsesCommentsAndLists) {
  std::istringstream in(
      "# header\n"
      "grid.n = 32   # trailing\n"
      "\n"
      "study.ladder = 3..6\n"
      "solver.dealias = false\n");
  const auto cfg = Config::parse(in, "t.cfg");
  EXPECT_EQ(cfg.get_int("grid.n"), 32);
  EXPECT_EQ(cfg.get_int_list("study.ladder"), (std::vector<int>{3, 4, 5, 6}));
  EXPECT_FALSE(cfg.get_bool("solver.dealias"));
  EXPECT_EQ(cfg.get_int("grid.dim"), 1);
  EXPECT_EQ(cfg.get_string("noise.variant"), "additive");
}

TEST(Config, ErrorsNameSourceAndLine) {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      Config::parse(in, "bad.cfg");
      ADD_FAILURE() << "expected ConfigError for: " << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error("grid.n = 8\nnoise.colour = red\n", "bad.cfg:2");
  expect_error("grid.n = 8\ngrid.n = 16\n", "bad.cfg:2");
  expect_error("grid.n\n", "bad.cfg:1");
  expect_error("grid.n =\n", "bad.cfg:1");
}

TEST(Config, TypedGettersRejectGarbage) {
  std::istringstream in("grid.n = many\nsolver.tol = 1e-8x\nsolver.dealias = maybe\n");
  const auto cfg = Config::parse(in, "g.cfg");
  EXPECT_THROW(cfg.get_int("grid.n"), ConfigError);
  EXPECT_THROW(cfg.get_double("solver.tol"), ConfigError);
  EXPECT_THROW(cfg.get_bool("solver.dealias"), ConfigError);
}

TEST(Config, EveryPresetLoads) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(SPDEAC_PRESET_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    ++count;
    SCOPED_TRACE(entry.path().string());
    const auto cfg = Config::load(entry.path());
    EXPECT_NO_THROW(grid_from_config(cfg));
    EXPECT_NO_THROW(noise_from_config(cfg));
    EXPECT_NO_THROW(scheme_from_config(cfg));
    EXPECT_NO_THROW(experiment_from_config(cfg));
  }
  EXPECT_GE(count, 6);
}

TEST_F(CliTest, SimulateWritesNonincreasingEnergies) {
  const auto cfg = write_config("z.cfg", kZeroNoise);
  const auto r = run({"simulate", "--config", cfg.string(), "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(slurp(dir_ / "trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "step,t,energy,dirichlet_part,potential_part,dissipation,l2_norm");
  std::vector<double> energies;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string step, t, e;
    std::getline(row, step, ',');
    std::getline(row, t, ',');
    std::getline(row, e, ',');
    energies.push_back(std::stod(e));
  }
  ASSERT_EQ(energies.size(), 11u);
  for (std::size_t m = 1; m < energies.size(); ++m) EXPECT_LE(energies[m], energies[m - 1]);
  EXPECT_TRUE(fs::exists(dir_ / "simulate.manifest.json"));
  const auto manifest = slurp(dir_ / "simulate.manifest.json");
  EXPECT_NE(manifest.find(fnv1a_hex(slurp(dir_ / "trajectory.csv"))), std::string::npos);
}

TEST_F(CliTest, SimulateIsByteDeterministic) {
  const auto noisy = write_config(
      "n.cfg",
      "grid.n = 32\nnoise.variant = affine\nnoise.modes = 4\nnoise.amplitude = 0.5\n"
      "scheme.tau = 0.0625\nscheme.steps = 10\n");
  const fs::path a = dir_ / "a", b = dir_ / "b", c = dir_ / "c";
  ASSERT_EQ(run({"simulate", "--config", noisy.string(), "--out", a.string()}).code, kExitOk);
  ASSERT_EQ(run({"simulate", "--config", noisy.string(), "--out", b.string()}).code, kExitOk);
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  ASSERT_EQ(run({"simulate", "--config", noisy.string(), "--seed", "99", "--out", c.string()}).code,
            kExitOk);
  EXPECT_NE(slurp(a / "trajectory.csv"), slurp(c / "trajectory.csv"));
}

TEST_F(CliTest, LargeStepIsRejectedWithTheRule) {
  const auto cfg = write_config("big.cfg", "scheme.tau = 0.6\n");
  const auto r = run({"simulate", "--config", cfg.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitInvalidInput);
  EXPECT_NE(r.err.find("tau < 1/2"), std::string::npos) << r.err;
}

TEST_F(CliTest, ConfigParseErrorExitsTwo) {
  const auto cfg = write_config("typo.cfg", "grid.size = 32\n");
  const auto r = run({"simulate", "--config", cfg.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitInvalidInput);
  EXPECT_NE(r.err.find("typo.cfg:1"), std::string::npos) << r.err;
  EXPECT_EQ(run({"simulate", "--config", (dir_ / "missing.cfg").string()}).code, kExitInvalidInput);
  EXPECT_EQ(run({"frobnicate"}).code, kExitInvalidInput);
}

TEST_F(CliTest, SingleRowLadderExitsTwo) {
  const auto cfg = write_config("one.cfg", "grid.n = 16\nstudy.ladder = 4\nstudy.ref_level = 7\nrun.samples = 2\n");
  const auto r = run({"strong-rate", "--config", cfg.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitInvalidInput);
  EXPECT_NE(r.err.find("3"), std::string::npos) << r.err;
}

TEST_F(CliTest, ConstantFunctionalGivesDegenerateTable) {
  const auto cfg = write_config("c.cfg", std::string(kSmallWeak) + "study.functional = const\n");
  const auto r = run({"weak-rate", "--config", cfg.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitInvalidInput);
  EXPECT_NE(r.err.find("degenerate"), std::string::npos) << r.err;
  // The all-zero table is still written.
  const auto csv = slurp(dir_ / "weak_rate.csv");
  EXPECT_EQ(csv.rfind("tau,error,std_error,n_samples\n", 0), 0u);
}

TEST_F(CliTest, UnknownFunctionalExitsTwo) {
  const auto cfg = write_config("u.cfg", std::string(kSmallWeak) + "study.functional = energy\n");
  EXPECT_EQ(run({"weak-rate", "--config", cfg.string(), "--out", dir_.string()}).code,
            kExitInvalidInput);
}

TEST_F(CliTest, WeakRateSmallStudyRuns) {
  const auto cfg = write_config("w.cfg", kSmallWeak);
  const auto r = run({"weak-rate", "--config", cfg.string(), "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("slope"), std::string::npos);
  EXPECT_NE(r.out.find("target rate 1"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "weak_rate.json"));
  EXPECT_TRUE(fs::exists(dir_ / "weak-rate.manifest.json"));
}

TEST_F(CliTest, StrongRateAndThreadsAgree) {
  const auto cfg = write_config(
      "s.cfg", "grid.n = 16\nnoise.modes = 4\nnoise.amplitude = 0.5\nstudy.ladder = 2..4\n"
               "study.ref_level = 7\nrun.samples = 4\n");
  const fs::path a = dir_ / "a", b = dir_ / "b";
  const auto r = run({"strong-rate", "--config", cfg.string(), "--out", a.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("target rate 1"), std::string::npos) << r.out;
  ASSERT_EQ(run({"strong-rate", "--config", cfg.string(), "--jobs", "2", "--out", b.string()}).code,
            kExitOk);
  EXPECT_EQ(slurp(a / "strong_rate.csv"), slurp(b / "strong_rate.csv"));
}

TEST_F(CliTest, EnergyCheckDeterministicPreset) {
  const fs::path preset = fs::path(SPDEAC_PRESET_DIR) / "deterministic_d1.cfg";
  const auto r = run({"energy-check", "--config", preset.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "energy_ledger.csv"));
}

TEST_F(CliTest, EnergyCheckNoisyMonitor) {
  const auto cfg = write_config(
      "m.cfg", "grid.n = 16\nnoise.variant = affine\nnoise.modes = 4\nnoise.amplitude = 0.5\n"
               "scheme.tau = 0.0625\nscheme.steps = 4\nrun.samples = 8\n");
  const auto r = run({"energy-check", "--config", cfg.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto csv = slurp(dir_ / "energy_moments.csv");
  EXPECT_EQ(csv.rfind("sample,max_energy,dissipation_sum\n", 0), 0u);
}

TEST_F(CliTest, EnergyCheckRejectsQuarterStep) {
  const auto cfg = write_config("q.cfg", "scheme.tau = 0.3\nscheme.steps = 2\n");
  const auto r = run({"energy-check", "--config", cfg.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitInvalidInput);
  EXPECT_NE(r.err.find("tau < 1/4"), std::string::npos) << r.err;
}

TEST_F(CliTest, OutputEnvironmentOverridesFlag) {
  const auto cfg = write_config("z.cfg", kZeroNoise);
  const fs::path env_dir = dir_ / "env";
  ::setenv("SPDE_AC_OUT", env_dir.string().c_str(), 1);
  const auto r = run({"simulate", "--config", cfg.string(), "--out", (dir_ / "flag").string()});
  ::unsetenv("SPDE_AC_OUT");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(env_dir / "trajectory.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "flag" / "trajectory.csv"));
}

TEST_F(CliTest, SelftestPassesAndFaultsFail) {
  const auto ok = run({"selftest"});
  EXPECT_EQ(ok.code, kExitOk) << ok.out;
  EXPECT_NE(ok.out.find("8/8 checks passed"), std::string::npos) << ok.out;

  const auto flip = run({"selftest", "--inject-fault", "flip_f_sign"});
  EXPECT_EQ(flip.code, kExitSelftestFailed);
  EXPECT_NE(flip.out.find("FAIL energy_inequality"), std::string::npos) << flip.out;

  const auto off = run({"selftest", "--inject-fault", "resolvent_off_by_one"});
  EXPECT_EQ(off.code, kExitSelftestFailed);
  EXPECT_NE(off.out.find("FAIL resolvent_smoothing"), std::string::npos) << off.out;

  EXPECT_EQ(run({"selftest", "--inject-fault", "nope"}).code, kExitInvalidInput);
}

TEST_F(CliTest, HelpDocumentsExitCodes) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  for (const char* s : {"  2  invalid input", "  3  a nonlinear", "  4  the deterministic", "SPDE_AC_OUT"}) {
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  }
}

TEST_F(CliTest, PrintConfigShowsDefaults) {
  const auto r = run({"simulate", "--print-config"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("solver.tol = 1e-10"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("grid.n = 64"), std::string::npos);
}

TEST(Checksum, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

}  // namespace
}  // namespace spdeac::cli
