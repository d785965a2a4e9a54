#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace syncnet::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kUnsatisfied = 2, kDiverged = 3 };

struct RunConfig {
    std::string command;  ///< analyze-graph | check-condition | simulate | reproduce | sweep
    std::string target;   ///< preset name, used when no config file is given
    std::optional<std::filesystem::path> config;
    std::filesystem::path out = "out";
    std::optional<double> dt, horizon, phi, gamma;
    std::optional<std::uint64_t> seed;  ///< flag value; SYNCNET_SEED is consulted when unset
    int jobs = 1;
    std::vector<double> phis;  ///< sweep grid
};

std::vector<std::string> command_names();

/// Runs one command, writes artifacts under cfg.out and a human summary to `log`.
/// Every library error maps to an exit code; nothing escapes.
int run(const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace syncnet::cli
