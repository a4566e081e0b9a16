#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "randop/cli/config.hpp"
#include "randop/cli/records.hpp"

namespace randop::cli {

enum ExitCode : int { kPass = 0, kVerdictFail = 1, kConfigError = 2, kFault = 3 };

inline constexpr const char* kOutputDirEnv = "RANDOP_OUTPUT_DIR";

// Runs the configured experiment and returns its records. Throws ConfigError,
// InvalidArgument or NumericalFault.
std::vector<Record> execute(const ExperimentConfig& config);

// true if any record carries verdict FAIL.
bool any_failed(const std::vector<Record>& records);

// runtime.out if set, else $RANDOP_OUTPUT_DIR/<experiment>.<jsonl|csv>, else
// empty (standard output).
std::string output_path(const ExperimentConfig& config);

// Whole `run` subcommand: load, execute, write. Diagnostics go to err.
int run(const std::optional<std::string>& config_path, const Overrides& overrides, std::ostream& out,
        std::ostream& err);

}  // namespace randop::cli
