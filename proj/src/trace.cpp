#include "memschrod/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace memschrod {

void EnergyTrace::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& [key, value] : metadata)   // std::map: fixed key order
        out << "# " << key << "=" << value << "\n";
    out << "t,E,l2\n";
    char line[128];
    for (const TraceRow& row : rows) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", row.t, row.E, row.l2);
        out << line;
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

EnergyTrace EnergyTrace::read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    EnergyTrace trace;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                key.erase(0, key.find_first_not_of(' '));
                trace.metadata[key] = line.substr(eq + 1);
            }
            continue;
        }
        if (!header_seen) {
            if (line.rfind("t,E,l2", 0) != 0)
                throw std::runtime_error(path.string() + ": expected 't,E,l2' header");
            header_seen = true;
            continue;
        }
        TraceRow row;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &row.t, &row.E, &row.l2) != 3)
            throw std::runtime_error(path.string() + ": malformed row: " + line);
        if (!trace.rows.empty() && !(row.t > trace.rows.back().t))
            throw std::runtime_error(path.string() + ": sample times must increase");
        trace.rows.push_back(row);
    }
    if (!header_seen) throw std::runtime_error(path.string() + ": missing header");
    return trace;
}

} // namespace memschrod
