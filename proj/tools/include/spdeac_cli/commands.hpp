// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spdeac_cli/config.hpp"

namespace spdeac::cli {

/// Process exit codes of spde-ac.
enum ExitCode : int {
  kExitOk = 0,
  kExitSelftestFailed = 1,
  kExitInvalidInput = 2,  ///< config, validation, degenerate table, unknown functional
  kExitNoConvergence = 3,
  kExitInequalityViolated = 4,
  kExitIo = 5,
  kExitInternal = 6,
};

/// Writing an output file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

struct CommandOptions {
  std::string command;
  std::optional<std::filesystem::path> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::filesystem::path out_dir = ".";
};

/// Applies --seed / --jobs overrides to a loaded config.
Config resolve_config(const CommandOptions& opts);

int cmd_simulate(const CommandOptions& opts, std::ostream& out);
int cmd_strong_rate(const CommandOptions& opts, std::ostream& out);
int cmd_weak_rate(const CommandOptions& opts, std::ostream& out);
int cmd_energy_check(const CommandOptions& opts, std::ostream& out);
int cmd_selftest(const CommandOptions& opts, std::ostream& out);

/// Full command line entry point; maps exceptions to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// FNV-1a 64 of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace spdeac::cli
