#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

namespace conjlab::cli {

/// Exit-code contract shared by every subcommand:
/// 0 pass, 1 verification violation, 2 config error, 3 hypothesis failure.
inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitHypothesis = 3;

struct CommandResult {
    int exit_code = kExitPass;
    nlohmann::json report;
    /// extra artifacts (CSV exports) keyed by filename, written by run_main
    std::map<std::string, std::string> files;
};

/// Runs one subcommand against a parsed config. Reports are deterministic
/// given (config, seed); the effective config with all defaults materialized
/// is echoed under "effective_config". File output stays with the caller.
CommandResult run_command(const std::string& command, const nlohmann::json& config,
                          std::optional<unsigned long long> seed_override);

/// Full CLI: parses arguments, reads the config file, writes report.json and
/// any CSV exports atomically under --out (default "."), returns the exit code.
int run_main(int argc, char** argv);

/// Atomic file write (temp + rename).
void write_file_atomic(const std::string& path, const std::string& contents);

/// 17-significant-digit decimal formatting used for all CSV payloads.
std::string csv_number(double x);

}  // namespace conjlab::cli
