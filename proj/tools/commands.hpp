#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace specfun::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2 };

int cmd_validate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_sample_m(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_invert(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_fourier(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_resolvent_check(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_report(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

// Loads the config and dispatches; maps ConfigError to kUsage and numerical
// failures to kFailure.
int run_command(const std::string& command, const std::filesystem::path& config,
                const std::optional<std::filesystem::path>& out, std::ostream& log);

// %.17g formatting used for every number written to CSV.
std::string format_real(double value);

}  // namespace specfun::cli
