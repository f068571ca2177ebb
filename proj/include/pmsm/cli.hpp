#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string_view>

#include "pmsm/scenario.hpp"

namespace pmsm::cli {

enum class Subcommand { Coeffs, Simulate, Compare, Identify };

std::string_view to_string(Subcommand sub);
std::optional<Subcommand> parse_subcommand(std::string_view name);

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kRuntimeError = 3 };

/**
 * @brief Runs one job and writes its artifacts into out_dir.
 *
 * The summary (plain `key: value` lines) goes to out_dir and to `out`;
 * diagnostics go to `err` as single lines prefixed `error:` or `warning:`.
 */
int run_scenario(Subcommand sub, const Scenario& scenario, const std::filesystem::path& out_dir, std::ostream& out,
                 std::ostream& err);

/// Full command line: `<tool> <subcommand> --scenario <path> [--out <dir>]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace pmsm::cli
