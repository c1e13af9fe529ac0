// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spdeac/fault_injection.hpp"
#include "spdeac/format.hpp"
#include "spdeac/oracles.hpp"
#include "spdeac/philox.hpp"

namespace spdeac::cli {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::ordered_json;

/// Collects output files of one command and writes its manifest.
class Outputs {
 public:
  Outputs(const CommandOptions& opts, const Config& cfg) : opts_(opts), cfg_(cfg), start_(Clock::now()) {}

  void write(const std::string& name, const std::string& bytes) {
    std::error_code ec;
    std::filesystem::create_directories(opts_.out_dir, ec);
    const auto path = opts_.out_dir / name;
    std::ofstream os(path, std::ios::binary);
    os << bytes;
    os.close();
    if (!os) throw IoError("cannot write " + path.string());
    files_.push_back({{"path", path.string()}, {"bytes", bytes.size()}, {"fnv1a64", fnv1a_hex(bytes)}});
  }

  void finish(const json& summary = json::object()) {
    json j;
    j["command"] = opts_.command;
    j["config_path"] = opts_.config_path ? opts_.config_path->string() : std::string();
    json params = json::object();
    for (const auto& [k, v] : cfg_.resolved()) params[k] = v;
    j["parameters"] = params;
    j["seed"] = cfg_.get_u64("run.seed");
    j["git_describe"] = build_description();
    j["outputs"] = files_;
    j["summary"] = summary;
    j["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
    write_manifest(j.dump(2) + "\n");
  }

 private:
  void write_manifest(const std::string& bytes) {
    const auto path = opts_.out_dir / (opts_.command + ".manifest.json");
    std::ofstream os(path, std::ios::binary);
    os << bytes;
    os.close();
    if (!os) throw IoError("cannot write " + path.string());
  }

  const CommandOptions& opts_;
  const Config& cfg_;
  Clock::time_point start_;
  json files_ = json::array();
};

ScalarField initial_from_config(const Config& cfg, const GridSpec& grid) {
  InitialPreset preset;
  try {
    preset = parse_initial_preset(cfg.get_string("initial.preset"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(cfg.source() + ": initial.preset: " + e.what());
  }
  return initial_condition(grid, preset, cfg.get_double("initial.value"));
}

SchemeConfig validated_scheme(const Config& cfg, bool energy_rule) {
  SchemeConfig scheme = scheme_from_config(cfg);
  try {
    scheme.validate(energy_rule);
  } catch (const InvalidArgument& e) {
    throw ConfigError(cfg.source() + ": " + e.what());
  }
  return scheme;
}

void require_fit_rows(const Config& cfg, const ExperimentSpec& spec) {
  if (spec.ladder_levels.size() < 3) {
    throw ConfigError(cfg.source() + ": study.ladder: a rate fit needs at least 3 ladder levels, got " +
                      std::to_string(spec.ladder_levels.size()));
  }
}

json fit_json(const RateFit& fit) {
  return {{"slope", fit.slope},   {"intercept", fit.intercept}, {"r_squared", fit.r_squared},
          {"ci95_low", fit.ci_low}, {"ci95_high", fit.ci_high},   {"rows_used", fit.rows_used.size()},
          {"rows_excluded", fit.rows_excluded.size()}};
}

void print_table(std::ostream& out, const ErrorTable& table) {
  out << "tau,error,std_error,n_samples\n";
  std::ostringstream csv;
  write_error_table_csv(csv, table);
  const std::string text = csv.str();
  out << text.substr(text.find('\n') + 1);
}

int rate_command(const CommandOptions& opts, std::ostream& out, bool weak) {
  const Config cfg = resolve_config(opts);
  ExperimentSpec spec = experiment_from_config(cfg);
  if (weak) {
    spec.error_kind = ErrorKind::WeakFunctional;
  } else if (spec.error_kind == ErrorKind::WeakFunctional) {
    throw ConfigError(cfg.source() + ": study.error: strong-rate needs a strong error kind");
  }
  require_fit_rows(cfg, spec);
  const FitOptions fit_opts = fit_options_from_config(cfg);

  const ErrorTable table = weak ? weak_error_study(spec) : strong_error_study(spec);
  Outputs outputs(opts, cfg);
  const std::string stem = weak ? "weak_rate" : "strong_rate";
  std::ostringstream csv;
  write_error_table_csv(csv, table);
  outputs.write(stem + ".csv", csv.str());
  print_table(out, table);

  const double target = (!weak && spec.noise.variant == NoiseVariant::Additive) ? 1.0 : (weak ? 1.0 : 0.5);
  RateFit fit;
  try {
    fit = fit_rate(table, fit_opts);
  } catch (const DegenerateTable&) {
    std::ostringstream meta;
    write_study_metadata(meta, spec, table, nullptr);
    outputs.write(stem + ".json", meta.str());
    outputs.finish({{"fit", "degenerate"}});
    throw;
  }
  std::ostringstream meta;
  write_study_metadata(meta, spec, table, &fit);
  outputs.write(stem + ".json", meta.str());
  out << "slope " << format_double(fit.slope) << " (95% CI [" << format_double(fit.ci_low) << ", "
      << format_double(fit.ci_high) << "]), r^2 " << format_double(fit.r_squared) << ", target rate "
      << format_double(target) << "\n";
  if (!fit.rows_excluded.empty()) {
    out << fit.rows_excluded.size() << " row(s) excluded: std_error above "
        << format_double(fit_opts.max_relative_se) << " of the estimate\n";
  }
  for (std::size_t r : table.monotonicity_violations()) {
    out << "note: error not monotone in tau at row " << r << " (tau " << format_double(table.rows[r].tau) << ")\n";
  }
  json summary = fit_json(fit);
  summary["target_rate"] = target;
  outputs.finish(summary);
  return kExitOk;
}

}  // namespace

Config resolve_config(const CommandOptions& opts) {
  Config cfg = opts.config_path ? Config::load(*opts.config_path) : Config();
  if (opts.seed) cfg.set("run.seed", std::to_string(*opts.seed));
  if (opts.jobs) cfg.set("run.jobs", std::to_string(*opts.jobs));
  return cfg;
}

int cmd_simulate(const CommandOptions& opts, std::ostream& out) {
  const Config cfg = resolve_config(opts);
  const GridSpec grid = grid_from_config(cfg);
  const NoiseSpec noise = noise_from_config(cfg);
  SchemeConfig scheme = validated_scheme(cfg, true);
  const ScalarField u0 = initial_from_config(cfg, grid);
  const std::uint64_t seed = cfg.get_u64("run.seed");
  // Same path as sample 0 of a study with this seed.
  const WienerPath path =
      sample_path(mix_seed(seed, 0), resolved_noise_modes(noise, grid), scheme.tau, scheme.num_steps);

  const TrajectoryRecord traj = run(scheme, u0, noise, path);
  Outputs outputs(opts, cfg);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  outputs.write("trajectory.csv", csv.str());
  out << "simulated " << traj.num_steps() << " steps of tau " << format_double(scheme.tau) << "; E(u_0) "
      << format_double(traj.energies.front().energy) << ", E(u_M) " << format_double(traj.energies.back().energy)
      << "\n";
  outputs.finish({{"steps", traj.num_steps()},
                  {"initial_energy", traj.energies.front().energy},
                  {"final_energy", traj.energies.back().energy}});
  return kExitOk;
}

int cmd_strong_rate(const CommandOptions& opts, std::ostream& out) { return rate_command(opts, out, false); }
int cmd_weak_rate(const CommandOptions& opts, std::ostream& out) { return rate_command(opts, out, true); }

int cmd_energy_check(const CommandOptions& opts, std::ostream& out) {
  const Config cfg = resolve_config(opts);
  MonitorSpec spec = monitor_from_config(cfg);
  Outputs outputs(opts, cfg);

  if (spec.noise.amplitude == 0.0) {
    // Deterministic flow: the discrete energy inequality is asserted step by step.
    const WienerPath path = sample_path(0, resolved_noise_modes(spec.noise, spec.grid), spec.scheme.tau,
                                        spec.scheme.num_steps);
    const TrajectoryRecord traj =
        run(spec.scheme, initial_condition(spec.grid, spec.initial, spec.initial_value), spec.noise, path);
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    outputs.write("energy_ledger.csv", csv.str());
    const LedgerReport rep = energy_ledger_check(traj, spec.scheme.tau, LedgerMode::Deterministic);
    out << "discrete energy inequality holds at all " << traj.num_steps() << " steps; min margin "
        << format_double(rep.min_margin) << "; strictly decreasing: " << (rep.strictly_decreasing ? "yes" : "no")
        << "\n";
    outputs.finish({{"min_margin", rep.min_margin}, {"strictly_decreasing", rep.strictly_decreasing}});
    return rep.strictly_decreasing ? kExitOk : kExitInequalityViolated;
  }

  const MomentMonitor monitor = energy_moment_monitor(spec);
  std::ostringstream csv;
  write_moment_csv(csv, monitor);
  outputs.write("energy_moments.csv", csv.str());
  const DoublingCheck energy = doubling_check(monitor.max_energy);
  const DoublingCheck dissipation = doubling_check(monitor.dissipation_sum);
  out << "E[max_m E(u_m)] = " << format_double(energy.all.mean) << " +- " << format_double(energy.all.std_error)
      << " (first half " << format_double(energy.half.mean) << ", change " << format_double(energy.change_in_se)
      << " pooled SE)\n";
  out << "E[tau sum ||DE||^2] = " << format_double(dissipation.all.mean) << " +- "
      << format_double(dissipation.all.std_error) << " (change " << format_double(dissipation.change_in_se)
      << " pooled SE)\n";
  out << "solver failures: " << monitor.solver_failures << "\n";
  outputs.finish({{"max_energy_mean", energy.all.mean},
                  {"max_energy_se", energy.all.std_error},
                  {"max_energy_change_se", energy.change_in_se},
                  {"dissipation_mean", dissipation.all.mean},
                  {"dissipation_change_se", dissipation.change_in_se},
                  {"solver_failures", monitor.solver_failures}});
  if (monitor.solver_failures > 0) {
    throw NoConvergence(0, std::nan(""), std::to_string(monitor.solver_failures) + " sample(s) failed to converge");
  }
  return kExitOk;
}

int cmd_selftest(const CommandOptions&, std::ostream& out) {
  const auto t0 = Clock::now();
  const auto checks = run_selftest_suite();
  std::vector<std::string> failed;
  for (const OracleCheck& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.id << " [" << c.estimate << "]: " << c.detail << "\n";
    if (!c.passed) failed.push_back(c.id);
  }
  out << checks.size() - failed.size() << "/" << checks.size() << " checks passed in "
      << format_double(std::round(std::chrono::duration<double>(Clock::now() - t0).count() * 1000.0) / 1000.0)
      << " s\n";
  if (failed.empty()) return kExitOk;
  out << "failed:";
  for (const auto& id : failed) out << ' ' << id;
  out << "\n";
  return kExitSelftestFailed;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure-preserving time stepping for the stochastic Allen-Cahn equation on the torus",
               "spde-ac"};
  app.footer(
      "Exit codes:\n"
      "  0  success\n"
      "  1  selftest: at least one check failed\n"
      "  2  invalid input: config parse/validation error, degenerate rate table, unknown functional\n"
      "  3  a nonlinear or linear solve did not converge\n"
      "  4  the deterministic discrete energy inequality was violated\n"
      "  5  an output file could not be written\n"
      "  6  internal error\n"
      "Environment: SPDE_AC_OUT overrides --out.\n"
      "Config keys (section.key = value, '#' starts a comment), shown with defaults by --print-config.");
  app.require_subcommand(1);

  CommandOptions opts;
  std::string config_path;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out_dir = ".";
  std::string fault = "none";
  bool print_config = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (section.key = value)")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed, overrides run.seed");
    sub->add_option("--jobs", jobs, "worker threads, overrides run.jobs")->check(CLI::Range(0u, 4096u));
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--print-config", print_config, "print every config key with its resolved value and exit");
    sub->add_option("--inject-fault", fault, "test hook")->group("");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "run one trajectory and write trajectory.csv");
  CLI::App* strong = app.add_subcommand("strong-rate", "strong error study and rate fit");
  CLI::App* weak = app.add_subcommand("weak-rate", "weak error study and rate fit");
  CLI::App* energy = app.add_subcommand("energy-check", "energy inequality or energy-moment monitor");
  CLI::App* selftest = app.add_subcommand("selftest", "operator-estimate oracle suite");
  for (CLI::App* sub : {simulate, strong, weak, energy, selftest}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  CLI::App* chosen = app.get_subcommands().front();
  opts.command = chosen->get_name();
  if (!config_path.empty()) opts.config_path = config_path;
  if (chosen->count("--seed")) opts.seed = seed;
  if (chosen->count("--jobs")) opts.jobs = jobs;
  opts.out_dir = out_dir;
  if (const char* env = std::getenv("SPDE_AC_OUT"); env != nullptr && *env != '\0') opts.out_dir = env;

  const auto parsed_fault = parse_fault(fault);
  if (!parsed_fault) {
    err << "error: unknown fault '" << fault << "'\n";
    return kExitInvalidInput;
  }
  ScopedFault guard(*parsed_fault);

  try {
    if (print_config) {
      const Config cfg = resolve_config(opts);
      for (const auto& [k, v] : cfg.resolved()) out << k << " = " << v << "\n";
      return kExitOk;
    }
    if (chosen == simulate) return cmd_simulate(opts, out);
    if (chosen == strong) return cmd_strong_rate(opts, out);
    if (chosen == weak) return cmd_weak_rate(opts, out);
    if (chosen == energy) return cmd_energy_check(opts, out);
    return cmd_selftest(opts, out);
  } catch (const InequalityViolated& e) {
    err << "error: " << e.what() << "\n";
    return kExitInequalityViolated;
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DegenerateTable& e) {
    err << "error: degenerate error table: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const UnknownFunctional& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const Error& e) {
    // Config, validation and other argument errors.
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace spdeac::cli
