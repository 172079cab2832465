#pragma once

#include "sirs/scenario.hpp"

#include <filesystem>
#include <ostream>
#include <vector>

namespace sirs {

// Each command prints a human-readable report to `out` and returns the
// artifacts it wrote under scenario.output_dir. Output file names are
// <name>_lambda.json, <name>_path.csv, <name>_ensemble.json,
// <name>_paths.csv and <name>_compare.json.

std::vector<std::filesystem::path> cmd_lambda(const Scenario& scenario, std::ostream& out);
std::vector<std::filesystem::path> cmd_simulate(const Scenario& scenario, std::ostream& out);
std::vector<std::filesystem::path> cmd_ensemble(const Scenario& scenario, std::ostream& out);
/// Throws ConfigError unless the scenario uses the ex8 or ex17 preset.
std::vector<std::filesystem::path> cmd_compare(const Scenario& scenario, std::ostream& out);
void cmd_validate(const Scenario& scenario, std::ostream& out);

/// Entry point of the sirsim executable. Exit codes: 0 success, 1 I/O or
/// other failure, 2 configuration error (including an unreadable scenario
/// file), 3 numerical failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace sirs
