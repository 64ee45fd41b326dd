#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace memschrod {

struct TraceRow {
    double t = 0.0;    // sample time
    double E = 0.0;    // discrete energy
    double l2 = 0.0;   // squared L2 norm, (L/2) sum |B_k|^2
};

/// Time series of energy samples with the originating run's identifiers.
/// Serializes to CSV: '#'-prefixed metadata lines, a "t,E,l2" header, then
/// one row per sample at full double precision.
struct EnergyTrace {
    std::vector<TraceRow> rows;
    std::map<std::string, std::string> metadata;

    void write_csv(const std::filesystem::path& path) const;
    static EnergyTrace read_csv(const std::filesystem::path& path);
};

} // namespace memschrod
