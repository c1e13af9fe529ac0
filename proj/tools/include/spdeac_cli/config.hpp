// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "spdeac/errors.hpp"
#include "spdeac/harness.hpp"
#include "spdeac/integrator.hpp"

namespace spdeac::cli {

/// Parse or validation failure tied to a config line or key.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// One documented key of the flat config format.
struct ConfigKey {
  const char* name;
  const char* default_value;
  const char* doc;
};

/// Every recognized key with its default.
const std::vector<ConfigKey>& config_schema();

/// Flat `section.key = value` configuration with `#` comments.
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::filesystem::path& path);

  /// Replaces a value (command-line overrides); the key must be in the schema.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;

  /// All keys, explicit values over defaults, in schema order.
  std::vector<std::pair<std::string, std::string>> resolved() const;
  const std::string& source() const noexcept { return source_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;  // 0 for defaults and overrides
  };
  const std::string& raw(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

  std::string source_ = "<defaults>";
  std::map<std::string, Entry> values_;
};

GridSpec grid_from_config(const Config& cfg);
NoiseSpec noise_from_config(const Config& cfg);
SolverConfig solver_from_config(const Config& cfg);
SchemeConfig scheme_from_config(const Config& cfg);
/// Rate-study parameters; validation errors name the offending key.
ExperimentSpec experiment_from_config(const Config& cfg);
FitOptions fit_options_from_config(const Config& cfg);
/// Energy-moment monitor inputs; the scheme must satisfy tau < 1/4.
MonitorSpec monitor_from_config(const Config& cfg);

}  // namespace spdeac::cli
