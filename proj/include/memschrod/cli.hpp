#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "memschrod/config.hpp"

namespace memschrod {

/// Output paths of a completed run, all under the chosen directory.
struct RunManifest {
    std::filesystem::path out_dir;
    std::filesystem::path trace_csv;
    std::filesystem::path final_state_csv;
    std::filesystem::path field_data;
    std::filesystem::path hypothesis_report;
    std::filesystem::path plot_script;
    std::filesystem::path config_echo;
    std::filesystem::path manifest_file;
};

/// Entry point behind the binary; returns the process exit code
/// (0 success, 1 domain failure, 2 usage error).
int cli_main(int argc, const char* const* argv,
             std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args,
             std::ostream& out, std::ostream& err);

} // namespace memschrod
