#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmsm/identification.hpp"
#include "pmsm/machine_model.hpp"
#include "pmsm/reference_sim.hpp"

namespace pmsm::cli {

enum class DeviationUnits { Relative, Absolute };

/// Per-family deviations added on top of the [machine] block.
struct ImbalanceSpec {
    DeviationUnits units = DeviationUnits::Relative;
    std::optional<Triple> r, l, m, lam;

    bool empty() const { return !r && !l && !m && !lam; }
};

struct OperatingPointSpec {
    double omega_e = 0.0;
    Dq0Vector i_cmd;                // current-fed command / voltage-fed target
    std::optional<Dq0Vector> v_cmd; // voltage-fed command; derived from i_cmd when absent
};

struct OutputSpec {
    std::optional<std::string> csv;     // default "<subcommand>.csv"
    std::optional<std::string> summary; // default "<subcommand>_summary.txt"
    std::vector<std::string> channels;  // empty = every channel
};

struct IdentifySpec {
    std::optional<ImbalanceFamily> family;
    std::optional<std::string> input; // CSV, relative paths resolve against the output directory
};

/**
 * @brief Fully validated scenario.
 *
 * `base` is the [machine] block alone and serves as the known nominal machine
 * for identification; `machine` has the [imbalance] block applied.
 */
struct Scenario {
    MachineParameters base;
    MachineParameters machine;
    ImbalanceSpec imbalance;
    std::optional<OperatingPointSpec> operating_point;
    SimConfig sim;
    OutputSpec output;
    IdentifySpec identify;
    std::vector<std::string> sections;                        // sections present in the file
    std::vector<std::pair<std::string, std::string>> resolved; // effective values after defaults
};

/**
 * Reads and validates a scenario file (INI-style sections of `key = value`,
 * full-line `#` or `;` comments). Throws ConfigError whose message starts with
 * the offending dotted key.
 */
Scenario parse_scenario(const std::filesystem::path& path);

/// Same as parse_scenario, from text already in memory.
Scenario parse_scenario_text(const std::string& text);

} // namespace pmsm::cli
