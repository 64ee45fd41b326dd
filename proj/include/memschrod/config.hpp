#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "memschrod/solver.hpp"

namespace memschrod {

struct OutputConfig {
    int snapshot_points = 256;   // spatial subintervals for profile/field output

    bool operator==(const OutputConfig&) const = default;
};

/// Parsed run description: simulation parameters plus output policy.
struct AppConfig {
    SimulationConfig sim;
    OutputConfig out;
    int halvings = 3;            // convergence-study halving count

    bool operator==(const AppConfig& other) const;
};

/// Flat INI-style format with sections [domain], [kernel], [scheme],
/// [initial], [output]; '#' starts a comment. Tabulated initial data is
/// loaded relative to the config file's directory.
AppConfig parse_config_text(const std::string& text,
                            const std::filesystem::path& base_dir = ".");
AppConfig parse_config_file(const std::filesystem::path& path);

/// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const AppConfig& config);

/// Bundled presets: the four Figure-3 style runs at desk scale plus the
/// conservative baseline and the long-running paper-scale setup.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
AppConfig preset_config(const std::string& name);

} // namespace memschrod
