// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "spdeac/format.hpp"
#include "spdeac/philox.hpp"

namespace spdeac::cli {

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"grid.dim", "1", "spatial dimension d in {1, 2, 3}"},
      {"grid.n", "64", "nodes per axis, a power of two >= 4"},
      {"noise.variant", "additive", "additive | nemytskii | affine"},
      {"noise.modes", "0", "number K of noise basis functions; 0 keeps every mode of weight >= 1e-8"},
      {"noise.decay", "2", "s in mu_k = c0 (1 + |kappa_k|^2)^-s"},
      {"noise.amplitude", "0", "c0; 0 switches the noise off"},
      {"noise.profile", "sin", "nemytskii profile: sin | rational | linear_growth"},
      {"initial.preset", "sin", "u0: sin | two_interface | constant"},
      {"initial.value", "1", "value of the constant preset"},
      {"scheme.variant", "implicit", "implicit | transformed_additive"},
      {"scheme.tau", "0.03125", "time step (simulate, energy-check)"},
      {"scheme.steps", "64", "number of steps M (simulate, energy-check)"},
      {"solver.tol", "1e-10", "absolute L2 residual tolerance of the implicit solve"},
      {"solver.max_iter", "100", "nonlinear iteration budget per step"},
      {"solver.method", "fixed_point", "fixed_point (Newton on stall) | newton"},
      {"solver.dealias", "true", "evaluate the cubic on the doubled grid"},
      {"run.seed", "1", "master seed; sample i uses a seed derived from (seed, i)"},
      {"run.samples", "100", "Monte Carlo samples N (rate studies, energy-check)"},
      {"run.jobs", "1", "worker threads; results do not depend on it"},
      {"study.T", "0.5", "final time of a rate study"},
      {"study.ladder", "4,5,6,7,8,9", "levels j of the ladder tau = T 2^-j, comma list or a..b"},
      {"study.ref_level", "12", "reference level; at least 3 above the finest ladder level"},
      {"study.error", "strong_l2_at_t", "strong_l2_at_t | strong_max_l2 | strong_h1_sum"},
      {"study.functional", "exp_neg_l2sq", "weak functional: exp_neg_l2sq | sin_pairing | const"},
      {"study.max_relative_se", "inf", "rows with std_error above this fraction of the error are left out of the fit"},
      {"study.bootstrap", "1000", "bootstrap resamples for the slope interval"},
      {"study.bootstrap_seed", "0", "bootstrap seed; 0 derives it from run.seed"},
  };
  return schema;
}

namespace {

const ConfigKey* find_key(const std::string& key) {
  const auto& schema = config_schema();
  const auto it = std::find_if(schema.begin(), schema.end(), [&](const ConfigKey& k) { return key == k.name; });
  return it == schema.end() ? nullptr : &*it;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(number);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string::npos) throw ConfigError(where + ": key '" + key + "' has no section");
    if (find_key(key) == nullptr) throw ConfigError(where + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + ": key '" + key + "' has an empty value");
    if (cfg.values_.count(key)) throw ConfigError(where + ": key '" + key + "' repeated");
    cfg.values_[key] = {value, number};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in, path.string());
}

void Config::set(const std::string& key, const std::string& value) {
  if (find_key(key) == nullptr) throw ConfigError("unknown key '" + key + "'");
  values_[key] = {value, 0};
}

const std::string& Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it != values_.end()) return it->second.value;
  const ConfigKey* k = find_key(key);
  if (k == nullptr) throw ConfigError("unknown key '" + key + "'");
  static thread_local std::string fallback;
  fallback = k->default_value;
  return fallback;
}

void Config::fail(const std::string& key, const std::string& message) const {
  const auto it = values_.find(key);
  std::string where = source_;
  if (it != values_.end() && it->second.line > 0) where += ":" + std::to_string(it->second.line);
  throw ConfigError(where + ": " + key + ": " + message);
}

std::string Config::get_string(const std::string& key) const { return raw(key); }

double Config::get_double(const std::string& key) const {
  const std::string text = raw(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) fail(key, "'" + text + "' is not a number");
    return v;
  } catch (const std::logic_error&) {
    fail(key, "'" + text + "' is not a number");
  }
}

std::int64_t Config::get_int(const std::string& key) const {
  const std::string text = raw(key);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) fail(key, "'" + text + "' is not an integer");
  return v;
}

std::uint64_t Config::get_u64(const std::string& key) const {
  const std::string text = raw(key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(key, "'" + text + "' is not an unsigned 64-bit integer");
  }
  return v;
}

bool Config::get_bool(const std::string& key) const {
  const std::string text = raw(key);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  fail(key, "'" + text + "' is not a boolean");
}

std::vector<int> Config::get_int_list(const std::string& key) const {
  const std::string text = raw(key);
  std::vector<int> out;
  auto parse_int = [&](const std::string& item) {
    const std::string t = trim(item);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      fail(key, "'" + t + "' is not an integer");
    }
    return v;
  };
  const auto range = text.find("..");
  if (range != std::string::npos) {
    const int lo = parse_int(text.substr(0, range));
    const int hi = parse_int(text.substr(range + 2));
    if (hi < lo) fail(key, "empty range '" + text + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(item));
  return out;
}

std::vector<std::pair<std::string, std::string>> Config::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const ConfigKey& k : config_schema()) out.emplace_back(k.name, raw(k.name));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <typename Fn>
auto keyed(const Config& cfg, const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(cfg.source() + ": " + key + ": " + e.what());
  }
}

int checked_int(const Config& cfg, const std::string& key, std::int64_t lo, std::int64_t hi) {
  const std::int64_t v = cfg.get_int(key);
  if (v < lo || v > hi) {
    throw ConfigError(cfg.source() + ": " + key + " = " + std::to_string(v) + " must lie in [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

}  // namespace

GridSpec grid_from_config(const Config& cfg) {
  const int dim = checked_int(cfg, "grid.dim", 1, 3);
  const int n = checked_int(cfg, "grid.n", 4, 1 << 12);
  return keyed(cfg, "grid.n", [&] { return GridSpec(dim, n); });
}

NoiseSpec noise_from_config(const Config& cfg) {
  NoiseSpec spec;
  const std::string variant = cfg.get_string("noise.variant");
  if (variant == "additive") {
    spec.variant = NoiseVariant::Additive;
  } else if (variant == "nemytskii") {
    spec.variant = NoiseVariant::Nemytskii;
  } else if (variant == "affine") {
    spec.variant = NoiseVariant::Affine;
  } else {
    throw ConfigError(cfg.source() + ": noise.variant: unknown variant '" + variant +
                      "' (expected additive, nemytskii, affine)");
  }
  const std::string profile = cfg.get_string("noise.profile");
  if (profile == "sin") {
    spec.profile = NemytskiiProfile::Sin;
  } else if (profile == "rational") {
    spec.profile = NemytskiiProfile::Rational;
  } else if (profile == "linear_growth") {
    spec.profile = NemytskiiProfile::LinearGrowth;
  } else {
    throw ConfigError(cfg.source() + ": noise.profile: unknown profile '" + profile +
                      "' (expected sin, rational, linear_growth)");
  }
  spec.num_modes = checked_int(cfg, "noise.modes", 0, 1 << 30);
  spec.decay = cfg.get_double("noise.decay");
  spec.amplitude = cfg.get_double("noise.amplitude");
  if (!std::isfinite(spec.decay) || spec.decay < 0.0) {
    throw ConfigError(cfg.source() + ": noise.decay must be finite and >= 0");
  }
  if (!std::isfinite(spec.amplitude) || spec.amplitude < 0.0) {
    throw ConfigError(cfg.source() + ": noise.amplitude must be finite and >= 0");
  }
  const GridSpec grid = grid_from_config(cfg);
  keyed(cfg, "noise.modes", [&] { return resolved_noise_modes(spec, grid); });
  return spec;
}

SolverConfig solver_from_config(const Config& cfg) {
  SolverConfig s;
  s.tol_residual = cfg.get_double("solver.tol");
  if (!(s.tol_residual > 0.0)) throw ConfigError(cfg.source() + ": solver.tol must be positive");
  s.max_iter = checked_int(cfg, "solver.max_iter", 1, 1 << 20);
  const std::string method = cfg.get_string("solver.method");
  if (method == "fixed_point") {
    s.method = SolverMethod::FixedPoint;
  } else if (method == "newton") {
    s.method = SolverMethod::Newton;
  } else {
    throw ConfigError(cfg.source() + ": solver.method: unknown method '" + method +
                      "' (expected fixed_point, newton)");
  }
  s.dealias = cfg.get_bool("solver.dealias");
  return s;
}

namespace {

SchemeVariant variant_from_config(const Config& cfg) {
  const std::string v = cfg.get_string("scheme.variant");
  if (v == "implicit") return SchemeVariant::Implicit;
  if (v == "transformed_additive") return SchemeVariant::TransformedAdditive;
  throw ConfigError(cfg.source() + ": scheme.variant: unknown variant '" + v +
                    "' (expected implicit, transformed_additive)");
}

}  // namespace

SchemeConfig scheme_from_config(const Config& cfg) {
  SchemeConfig s;
  s.tau = cfg.get_double("scheme.tau");
  s.num_steps = static_cast<std::size_t>(checked_int(cfg, "scheme.steps", 1, 1 << 30));
  s.variant = variant_from_config(cfg);
  s.solver = solver_from_config(cfg);
  return s;
}

ExperimentSpec experiment_from_config(const Config& cfg) {
  ExperimentSpec spec;
  spec.grid = grid_from_config(cfg);
  spec.noise = noise_from_config(cfg);
  spec.initial = keyed(cfg, "initial.preset", [&] { return parse_initial_preset(cfg.get_string("initial.preset")); });
  spec.initial_value = cfg.get_double("initial.value");
  spec.horizon = cfg.get_double("study.T");
  spec.ladder_levels = cfg.get_int_list("study.ladder");
  spec.reference_level = checked_int(cfg, "study.ref_level", 0, 24);
  spec.num_samples = static_cast<std::size_t>(checked_int(cfg, "run.samples", 2, 1 << 30));
  spec.seed = cfg.get_u64("run.seed");
  spec.error_kind = keyed(cfg, "study.error", [&] { return parse_error_kind(cfg.get_string("study.error")); });
  spec.functional = parse_functional(cfg.get_string("study.functional"));
  spec.variant = variant_from_config(cfg);
  spec.solver = solver_from_config(cfg);
  spec.jobs = static_cast<unsigned>(checked_int(cfg, "run.jobs", 0, 4096));
  std::sort(spec.ladder_levels.begin(), spec.ladder_levels.end());
  spec.ladder_levels.erase(std::unique(spec.ladder_levels.begin(), spec.ladder_levels.end()), spec.ladder_levels.end());
  keyed(cfg, "study", [&] {
    spec.validate(true);
    return 0;
  });
  return spec;
}

FitOptions fit_options_from_config(const Config& cfg) {
  FitOptions f;
  f.bootstrap_resamples = checked_int(cfg, "study.bootstrap", 0, 1 << 24);
  f.max_relative_se = cfg.get_double("study.max_relative_se");
  if (!(f.max_relative_se > 0.0)) throw ConfigError(cfg.source() + ": study.max_relative_se must be positive");
  const std::uint64_t seed = cfg.get_u64("study.bootstrap_seed");
  f.seed = seed != 0 ? seed : mix_seed(cfg.get_u64("run.seed"), 0xb007);
  return f;
}

MonitorSpec monitor_from_config(const Config& cfg) {
  MonitorSpec spec;
  spec.grid = grid_from_config(cfg);
  spec.noise = noise_from_config(cfg);
  spec.scheme = scheme_from_config(cfg);
  keyed(cfg, "scheme", [&] {
    spec.scheme.validate(true);
    return 0;
  });
  spec.initial = keyed(cfg, "initial.preset", [&] { return parse_initial_preset(cfg.get_string("initial.preset")); });
  spec.initial_value = cfg.get_double("initial.value");
  spec.num_samples = static_cast<std::size_t>(checked_int(cfg, "run.samples", 2, 1 << 30));
  spec.seed = cfg.get_u64("run.seed");
  spec.jobs = static_cast<unsigned>(checked_int(cfg, "run.jobs", 0, 4096));
  return spec;
}

}  // namespace spdeac::cli
