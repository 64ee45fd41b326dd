#include "memschrod/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace memschrod {

bool AppConfig::operator==(const AppConfig& other) const {
    const SimulationConfig& a = sim;
    const SimulationConfig& b = other.sim;
    return a.length == b.length && a.dispersion == b.dispersion &&
           a.equation == b.equation && a.kernel == b.kernel && a.modes == b.modes &&
           a.dt == b.dt && a.steps == b.steps &&
           a.effective_history() == b.effective_history() &&
           a.energy_stride == b.energy_stride &&
           a.effective_quad_points() == b.effective_quad_points() &&
           a.initial == b.initial && out == other.out && halvings == other.halvings;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyValues {
    std::map<std::string, std::string> values;
    std::map<std::string, bool> used;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    std::string get(const std::string& key) {
        auto it = values.find(key);
        if (it == values.end())
            throw std::invalid_argument("config: missing key '" + key + "'");
        used[key] = true;
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        return get(key);
    }

    double get_double(const std::string& key) {
        const std::string v = get(key);
        std::size_t pos = 0;
        double x;
        try {
            x = std::stod(v, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: bad number for '" + key + "': " + v);
        }
        if (pos != v.size())
            throw std::invalid_argument("config: bad number for '" + key + "': " + v);
        return x;
    }

    double get_double_or(const std::string& key, double fallback) {
        return has(key) ? get_double(key) : fallback;
    }

    int get_int(const std::string& key) {
        const double x = get_double(key);
        const int i = static_cast<int>(x);
        if (static_cast<double>(i) != x)
            throw std::invalid_argument("config: '" + key + "' must be an integer");
        return i;
    }

    int get_int_or(const std::string& key, int fallback) {
        return has(key) ? get_int(key) : fallback;
    }

    void check_all_used(const std::string& section) const {
        for (const auto& [key, value] : values)
            if (!used.count(key))
                throw std::invalid_argument("config: unknown key '" + key +
                                            "' in section [" + section + "]");
    }
};

using Sections = std::map<std::string, KeyValues>;

Sections split_sections(const std::string& text) {
    Sections sections;
    std::istringstream in(text);
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section at line " +
                                            std::to_string(lineno));
            current = trim(line.substr(1, line.size() - 2));
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || current.empty())
            throw std::invalid_argument("config: expected 'key = value' at line " +
                                        std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key at line " + std::to_string(lineno));
        if (!sections[current].values.emplace(key, value).second)
            throw std::invalid_argument("config: duplicate key '" + key + "'");
    }
    return sections;
}

InitialHistory load_tabulated(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw std::invalid_argument("config: cannot read initial samples " + file.string());
    std::vector<double> xs;
    std::vector<Complex> ys;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        if (xs.empty() && line.find_first_not_of("0123456789+-.eE, \t") != std::string::npos)
            continue;   // header row
        double x, re, im;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &x, &re, &im) != 3)
            throw std::invalid_argument(file.string() + ": expected 'x,re,im' rows");
        xs.push_back(x);
        ys.emplace_back(re, im);
    }
    InitialHistory h = InitialHistory::tabulated(std::move(xs), std::move(ys));
    h.set_source_path(file.string());
    return h;
}

} // namespace

AppConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
    Sections sections = split_sections(text);
    for (const auto& [name, kv] : sections)
        if (name != "domain" && name != "kernel" && name != "scheme" &&
            name != "initial" && name != "output")
            throw std::invalid_argument("config: unknown section [" + name + "]");

    AppConfig cfg;
    SimulationConfig& sim = cfg.sim;

    KeyValues& domain = sections["domain"];
    sim.length = domain.get_double_or("length", 1.0);
    sim.dispersion = domain.get_double_or("dispersion", 1.0);
    domain.check_all_used("domain");

    KeyValues& kernel = sections["kernel"];
    const std::string variant = kernel.get_or("variant", "none");
    if (variant == "none") {
        sim.kernel = KernelSpec::none();
    } else if (variant == "exponential") {
        sim.kernel = KernelSpec::exponential(kernel.get_double("amplitude"),
                                             kernel.get_double("exponent"));
    } else if (variant == "polynomial") {
        sim.kernel = KernelSpec::polynomial(kernel.get_double("amplitude"),
                                            kernel.get_double("exponent"));
    } else {
        throw std::invalid_argument("config: unknown kernel variant '" + variant + "'");
    }
    kernel.check_all_used("kernel");

    KeyValues& scheme = sections["scheme"];
    const std::string equation = scheme.get_or("equation", "no-memory");
    if (equation == "no-memory") sim.equation = EquationVariant::NoMemory;
    else if (equation == "laplacian") sim.equation = EquationVariant::LaplacianMemory;
    else if (equation == "zeroth-order") sim.equation = EquationVariant::ZerothOrderMemory;
    else throw std::invalid_argument("config: unknown equation '" + equation + "'");
    sim.modes = scheme.get_int("modes");
    sim.dt = scheme.get_double("dt");
    sim.steps = scheme.get_int("steps");
    sim.history_steps = scheme.get_int_or("history_steps", -1);
    sim.quad_points = scheme.get_int_or("quad_points", -1);
    cfg.halvings = scheme.get_int_or("halvings", 3);
    scheme.check_all_used("scheme");

    KeyValues& initial = sections["initial"];
    const std::string profile = initial.get_or("profile", "soliton");
    if (profile == "soliton") {
        const double amplitude = initial.get_double_or("amplitude", 4.0);
        const double wavenumber = initial.get_double_or("wavenumber", 7.0);
        const double width = initial.get_double_or(
            "width", InitialHistory::soliton_default_width(amplitude, wavenumber));
        const double center = initial.get_double_or("center", 0.4);
        sim.initial = InitialHistory::soliton(amplitude, wavenumber, width, center);
    } else if (profile == "csv") {
        const std::filesystem::path file = initial.get("file");
        sim.initial = load_tabulated(file.is_absolute() ? file : base_dir / file);
    } else {
        throw std::invalid_argument("config: unknown initial profile '" + profile + "'");
    }
    initial.check_all_used("initial");

    KeyValues& output = sections["output"];
    sim.energy_stride = output.get_int_or("energy_stride", 100);
    cfg.out.snapshot_points = output.get_int_or("snapshot_points", 256);
    output.check_all_used("output");
    if (cfg.out.snapshot_points < 2)
        throw std::invalid_argument("config: snapshot_points must be >= 2");

    sim.validate();
    return cfg;
}

AppConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), path.has_parent_path() ? path.parent_path() : ".");
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string serialize_config(const AppConfig& cfg) {
    const SimulationConfig& sim = cfg.sim;
    std::ostringstream out;
    out << "[domain]\n";
    out << "length = " << fmt(sim.length) << "\n";
    out << "dispersion = " << fmt(sim.dispersion) << "\n\n";

    out << "[kernel]\n";
    out << "variant = " << to_string(sim.kernel.family()) << "\n";
    if (sim.kernel.family() != KernelFamily::None) {
        out << "amplitude = " << fmt(sim.kernel.amplitude()) << "\n";
        out << "exponent = " << fmt(sim.kernel.exponent()) << "\n";
    }
    out << "\n[scheme]\n";
    out << "equation = " << to_string(sim.equation) << "\n";
    out << "modes = " << sim.modes << "\n";
    out << "dt = " << fmt(sim.dt) << "\n";
    out << "steps = " << sim.steps << "\n";
    out << "history_steps = " << sim.effective_history() << "\n";
    out << "quad_points = " << sim.effective_quad_points() << "\n";
    out << "halvings = " << cfg.halvings << "\n";

    out << "\n[initial]\n";
    if (sim.initial.kind() == InitialHistory::Kind::Soliton) {
        const auto p = sim.initial.soliton_params();
        out << "profile = soliton\n";
        out << "amplitude = " << fmt(p[0]) << "\n";
        out << "wavenumber = " << fmt(p[1]) << "\n";
        out << "width = " << fmt(p[2]) << "\n";
        out << "center = " << fmt(p[3]) << "\n";
    } else if (sim.initial.kind() == InitialHistory::Kind::Tabulated) {
        out << "profile = csv\n";
        out << "file = " << sim.initial.source_path() << "\n";
    } else {
        throw std::invalid_argument("analytic initial profiles cannot be serialized");
    }

    out << "\n[output]\n";
    out << "energy_stride = " << sim.energy_stride << "\n";
    out << "snapshot_points = " << cfg.out.snapshot_points << "\n";
    return out.str();
}

namespace {

// Desk-scale quartet: the paper-style setup reduced to minutes. The memory
// window is twice the run so the heavy-tailed kernel's pre-run history stays
// inside the energy's window for the whole run; otherwise the trace ends
// with a truncation cliff that corrupts fitted rates.
constexpr const char* kDeskCommon =
    "[domain]\n"
    "length = 1.0\n"
    "dispersion = 1.0\n"
    "[scheme]\n"
    "modes = 16\n"
    "dt = 0.05\n"
    "steps = 4000\n"
    "history_steps = 8000\n"
    "[initial]\n"
    "profile = soliton\n"
    "amplitude = 4.0\n"
    "wavenumber = 7.0\n"
    "center = 0.4\n"
    "[output]\n"
    "energy_stride = 100\n";

const std::map<std::string, std::string>& preset_map() {
    static const std::map<std::string, std::string> presets = {
        {"no-memory",
         "[domain]\n"
         "length = 1.0\n"
         "dispersion = 1.0\n"
         "[kernel]\n"
         "variant = none\n"
         "[scheme]\n"
         "equation = no-memory\n"
         "modes = 16\n"
         "dt = 0.05\n"
         "steps = 4000\n"
         "[initial]\n"
         "profile = soliton\n"
         "amplitude = 4.0\n"
         "wavenumber = 7.0\n"
         "center = 0.4\n"
         "[output]\n"
         "energy_stride = 100\n"},
        {"figure2-exponential",
         std::string(kDeskCommon) +
         "[kernel]\nvariant = exponential\namplitude = 10000\nexponent = 1.0\n"
         "[scheme]\nequation = zeroth-order\n"},
        {"zeroth-polynomial",
         std::string(kDeskCommon) +
         "[kernel]\nvariant = polynomial\namplitude = 10000\nexponent = 4.0\n"
         "[scheme]\nequation = zeroth-order\n"},
        {"laplacian-exponential",
         std::string(kDeskCommon) +
         "[kernel]\nvariant = exponential\namplitude = 10000\nexponent = 1.0\n"
         "[scheme]\nequation = laplacian\n"},
        {"laplacian-polynomial",
         std::string(kDeskCommon) +
         "[kernel]\nvariant = polynomial\namplitude = 10000\nexponent = 4.0\n"
         "[scheme]\nequation = laplacian\n"},
        // paper-scale setup; hours of CPU and ~700 MB of state for the
        // polynomial kernel, minutes for the exponential one
        {"paper-scale",
         "[domain]\n"
         "length = 1.0\n"
         "dispersion = 1.0\n"
         "[kernel]\n"
         "variant = exponential\n"
         "amplitude = 10000\n"
         "exponent = 1.0\n"
         "[scheme]\n"
         "equation = zeroth-order\n"
         "modes = 1024\n"
         "dt = 0.1\n"
         "steps = 20000\n"
         "history_steps = 20000\n"
         "[initial]\n"
         "profile = soliton\n"
         "amplitude = 4.0\n"
         "wavenumber = 7.0\n"
         "center = 0.4\n"
         "[output]\n"
         "energy_stride = 100\n"},
    };
    return presets;
}

} // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : preset_map()) names.push_back(name);
    return names;
}

bool is_preset(const std::string& name) { return preset_map().count(name) != 0; }

AppConfig preset_config(const std::string& name) {
    const auto it = preset_map().find(name);
    if (it == preset_map().end())
        throw std::invalid_argument("unknown preset '" + name + "'");
    return parse_config_text(it->second);
}

} // namespace memschrod
