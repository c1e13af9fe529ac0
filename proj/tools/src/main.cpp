// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "spdeac_cli/commands.hpp"

int main(int argc, char** argv) { return spdeac::cli::run_cli(argc, argv, std::cout, std::cerr); }
