#include "memschrod/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "memschrod/analysis.hpp"

namespace memschrod {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hypothesis_text(const KernelSpec& kernel, const HypothesisReport& report) {
    std::ostringstream out;
    out << "variant=" << to_string(kernel.family()) << "\n";
    out << "g0=" << fmt(report.g0_mass);
    if (kernel.family() == KernelFamily::None) out << ": conservative";
    out << "\n";
    out << "h1=" << (report.h1_ok ? "ok" : "violated") << "\n";
    out << "h2=" << (report.h2_ok ? "ok" : "violated");
    if (report.beta0) out << " beta0=" << fmt(*report.beta0);
    out << "\n";
    switch (report.branch) {
        case DecayBranch::Exponential:
            out << "branch=exponential alpha0=" << fmt(report.alpha0) << "\n";
            break;
        case DecayBranch::Convex:
            out << "branch=convex p=" << fmt(report.p) << "\n";
            break;
        case DecayBranch::NotSatisfied:
            out << "branch=none\n";
            break;
    }
    if (kernel.family() != KernelFamily::None)
        out << "grid_audit=" << (report.grid_audit_ok ? "ok" : "violated") << "\n";
    if (!report.violation.empty()) out << "violation: " << report.violation << "\n";
    out << "result=" << (report.all_ok() ? "pass" : "fail") << "\n";
    return out.str();
}

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string out_dir = "out";
    int stride_override = 0;

    AppConfig load() const {
        AppConfig cfg = preset.empty() ? parse_config_file(config_path)
                                       : preset_config(preset);
        if (stride_override > 0) cfg.sim.energy_stride = stride_override;
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_config) {
    auto* config = cmd->add_option("--config", args.config_path, "config file path");
    auto* preset = cmd->add_option("--preset", args.preset, "bundled preset name");
    config->excludes(preset);
    if (need_config) {
        cmd->callback([&args]() {
            if (args.config_path.empty() && args.preset.empty())
                throw CLI::RequiredError("--config or --preset");
        });
    }
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--stride", args.stride_override, "override energy sampling stride")
        ->check(CLI::PositiveNumber);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<double> snapshot_grid(double length, int points) {
    std::vector<double> xs(points + 1);
    for (int j = 0; j <= points; ++j) xs[j] = length * j / points;
    return xs;
}

std::string plot_script_text() {
    return
        "# render with: gnuplot plot.gp\n"
        "set terminal pngcairo size 900,600\n"
        "set datafile separator ','\n"
        "set output 'energy.png'\n"
        "set logscale y\n"
        "set xlabel 't'\n"
        "set ylabel 'energy'\n"
        "plot 'trace.csv' using 1:2 with lines title 'E', \\\n"
        "     'trace.csv' using 1:3 with lines title '||y||^2'\n"
        "unset logscale y\n"
        "set datafile separator whitespace\n"
        "set output 'field.png'\n"
        "set xlabel 'x'\n"
        "set ylabel 't'\n"
        "plot 'field.dat' nonuniform matrix with image title '|y|'\n";
}

int cmd_check_kernel(const CommonArgs& args, std::ostream& out) {
    const AppConfig cfg = args.load();
    const HypothesisReport report = check_hypotheses(cfg.sim.kernel);
    const std::string text = hypothesis_text(cfg.sim.kernel, report);
    out << text;
    fs::create_directories(args.out_dir);
    write_text(fs::path(args.out_dir) / "hypothesis.txt", text);
    return report.all_ok() ? 0 : 1;
}

int cmd_run(const CommonArgs& args, std::ostream& out, std::ostream& err) {
    const AppConfig cfg = args.load();
    const HypothesisReport report = check_hypotheses(cfg.sim.kernel);
    if (!report.all_ok()) {
        err << hypothesis_text(cfg.sim.kernel, report);
        err << "error: kernel hypotheses violated; refusing to run\n";
        return 1;
    }

    RunManifest manifest;
    manifest.out_dir = args.out_dir;
    fs::create_directories(manifest.out_dir);
    manifest.trace_csv = manifest.out_dir / "trace.csv";
    manifest.final_state_csv = manifest.out_dir / "final_state.csv";
    manifest.field_data = manifest.out_dir / "field.dat";
    manifest.hypothesis_report = manifest.out_dir / "hypothesis.txt";
    manifest.plot_script = manifest.out_dir / "plot.gp";
    manifest.config_echo = manifest.out_dir / "config.ini";
    manifest.manifest_file = manifest.out_dir / "manifest.txt";

    const std::vector<double> xs = snapshot_grid(cfg.sim.length, cfg.out.snapshot_points);
    std::ofstream field(manifest.field_data, std::ios::binary);
    if (!field) throw std::runtime_error("cannot write " + manifest.field_data.string());
    field << xs.size();
    for (double x : xs) field << ' ' << fmt(x);
    field << '\n';

    const auto observer = [&](double t, const ModalState& state) {
        const ModalCoefficients coeffs = state.coefficients(cfg.sim.length);
        const std::vector<Complex> ys = reconstruct(coeffs, xs);
        field << fmt(t);
        for (const Complex& y : ys) field << ' ' << fmt(std::abs(y));
        field << '\n';
    };

    std::optional<RunResult> result;
    try {
        result.emplace(run(cfg.sim, RunOptions{}, observer));
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    field.close();

    result->trace.write_csv(manifest.trace_csv);

    const ModalCoefficients final_coeffs = result->final_state.coefficients(cfg.sim.length);
    const std::vector<Complex> ys = reconstruct(final_coeffs, xs);
    std::ostringstream fin;
    fin << "x,re_y,im_y,abs_y\n";
    for (std::size_t j = 0; j < xs.size(); ++j)
        fin << fmt(xs[j]) << ',' << fmt(ys[j].real()) << ',' << fmt(ys[j].imag()) << ','
            << fmt(std::abs(ys[j])) << "\n";
    write_text(manifest.final_state_csv, fin.str());

    write_text(manifest.hypothesis_report, hypothesis_text(cfg.sim.kernel, report));
    write_text(manifest.plot_script, plot_script_text());
    write_text(manifest.config_echo, serialize_config(cfg));

    std::ostringstream man;
    man << "trace=" << manifest.trace_csv.filename().string() << "\n"
        << "final_state=" << manifest.final_state_csv.filename().string() << "\n"
        << "field=" << manifest.field_data.filename().string() << "\n"
        << "hypothesis=" << manifest.hypothesis_report.filename().string() << "\n"
        << "plot=" << manifest.plot_script.filename().string() << "\n"
        << "config=" << manifest.config_echo.filename().string() << "\n";
    write_text(manifest.manifest_file, man.str());

    out << "wrote " << manifest.out_dir.string() << " ("
        << result->trace.rows.size() << " energy samples, final t="
        << fmt(cfg.sim.steps * cfg.sim.dt) << ")\n";
    return 0;
}

struct TraceFit {
    std::string path;
    std::string label;
    double rate = 0.0;
    double r2 = 0.0;
};

int cmd_compare(const std::vector<std::string>& paths, std::ostream& out,
                std::ostream& err) {
    std::vector<TraceFit> fits;
    std::set<std::string> kinds;
    for (const std::string& path : paths) {
        EnergyTrace trace;
        try {
            trace = EnergyTrace::read_csv(path);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
        TraceFit fit;
        fit.path = path;
        const auto eq = trace.metadata.find("equation");
        const auto kn = trace.metadata.find("kernel");
        if (eq != trace.metadata.end() && kn != trace.metadata.end()) {
            fit.label = eq->second + "+" + kn->second;
            kinds.insert(fit.label);
        }
        try {
            const auto [lo, hi] = default_fit_window(trace);
            const DecayFit decay = fit_decay(trace, FitModel::Exponential, lo, hi);
            fit.rate = decay.rate;
            fit.r2 = decay.r2;
        } catch (const std::domain_error& e) {
            err << "error: " << path << ": " << e.what() << "\n";
            return 1;
        } catch (const std::invalid_argument& e) {
            err << "error: " << path << ": " << e.what() << "\n";
            return 1;
        }
        fits.push_back(fit);
    }

    std::stable_sort(fits.begin(), fits.end(),
                     [](const TraceFit& a, const TraceFit& b) { return a.rate > b.rate; });
    for (const TraceFit& fit : fits) {
        out << "rate=" << fmt(fit.rate) << " r2=" << fmt(fit.r2);
        if (!fit.label.empty()) out << " [" << fit.label << "]";
        out << " " << fit.path << "\n";
    }

    const bool quartet = kinds.size() == 4 &&
                         kinds.count("zeroth-order+exponential") &&
                         kinds.count("zeroth-order+polynomial") &&
                         kinds.count("laplacian+exponential") &&
                         kinds.count("laplacian+polynomial");
    if (quartet && fits.size() == 4) {
        const bool expected = fits.front().label == "zeroth-order+exponential";
        out << "quartet ordering: "
            << (expected ? "as expected (zeroth-order+exponential fastest)"
                         : "UNEXPECTED (zeroth-order+exponential is not fastest)")
            << "\n";
    } else if (fits.size() < 2) {
        out << "single trace: no ordering to report\n";
    }
    return 0;
}

// Single-mode convergence study. No-memory converges against the finest
// grid's own solution; exponential kernels against an RK4 integration of
// the equivalent local system B' = -i a mu B - w z, z' = -q z + (d/q) B.
struct ConvergenceRow {
    double dt;
    double error;
};

Complex rk4_reference(double a, double mu, double w, double d, double q,
                      Complex b0, double T, double h) {
    Complex b = b0;
    Complex z = d / (q * q) * b0;   // constant history
    const auto f = [&](Complex bb, Complex zz) {
        return std::pair<Complex, Complex>(Complex(0, -1) * (a * mu) * bb - w * zz,
                                           -q * zz + (d / q) * bb);
    };
    const long n = std::lround(T / h);
    for (long i = 0; i < n; ++i) {
        const auto k1 = f(b, z);
        const auto k2 = f(b + 0.5 * h * k1.first, z + 0.5 * h * k1.second);
        const auto k3 = f(b + 0.5 * h * k2.first, z + 0.5 * h * k2.second);
        const auto k4 = f(b + h * k3.first, z + h * k3.second);
        b += h / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
        z += h / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
    }
    return b;
}

Complex single_mode_final(const SimulationConfig& base, double dt, int steps) {
    SimulationConfig cfg = base;
    cfg.modes = 1;
    cfg.dt = dt;
    cfg.steps = steps;
    cfg.energy_stride = std::max(1, steps);
    if (cfg.equation != EquationVariant::NoMemory) {
        const double horizon = 40.0 / cfg.kernel.exponent();   // exp tail < 5e-18
        cfg.history_steps = std::max(cfg.steps, static_cast<int>(std::ceil(horizon / dt)));
    }
    const RunResult result = run(cfg, RunOptions{});
    return result.final_state.amplitude(1);
}

int cmd_convergence(const CommonArgs& args, int halvings_flag, std::ostream& out,
                    std::ostream& err) {
    const AppConfig cfg = args.load();
    const int halvings = halvings_flag > 0 ? halvings_flag : cfg.halvings;
    if (halvings < 3) {
        err << "error: need at least 3 halvings\n";
        return 2;
    }
    const SimulationConfig& sim = cfg.sim;
    const bool memory = sim.equation != EquationVariant::NoMemory;
    if (memory && sim.kernel.family() != KernelFamily::Exponential) {
        err << "error: convergence study supports no-memory or exponential kernels\n";
        return 2;
    }

    const double T = sim.steps * sim.dt;
    // initial amplitude of the isolated mode
    const Complex b0 =
        project([&](double x) { return sim.initial(x, 0.0); }, 1, sim.length,
                sim.effective_quad_points()).values[0];

    std::vector<ConvergenceRow> rows;
    Complex self_reference(0.0, 0.0);
    if (!memory) {
        const double dt_ref = sim.dt / std::pow(2.0, halvings + 1);
        self_reference = single_mode_final(sim, dt_ref,
                                           static_cast<int>(std::lround(T / dt_ref)));
    }

    out << "dt,error,order\n";
    double prev_err = 0.0;
    std::vector<double> orders;
    bool all_zero = true;
    for (int level = 0; level <= halvings; ++level) {
        const double dt = sim.dt / std::pow(2.0, level);
        const int steps = static_cast<int>(std::lround(T / dt));
        const Complex ref =
            memory ? rk4_reference(sim.dispersion, sim.mu(1), sim.memory_weight(1),
                                   sim.kernel.amplitude(), sim.kernel.exponent(), b0, T,
                                   dt / 100.0)
                   : self_reference;
        const Complex b = single_mode_final(sim, dt, steps);
        const double error = std::abs(b - ref);
        if (error != 0.0) all_zero = false;
        out << fmt(dt) << "," << fmt(error);
        if (level > 0 && prev_err > 0.0 && error > 0.0) {
            const double order = std::log2(prev_err / error);
            orders.push_back(order);
            out << "," << fmt(order);
        } else {
            out << ",";
        }
        out << "\n";
        prev_err = error;
        rows.push_back({dt, error});
    }

    if (all_zero) {
        out << "observed order: exact (all errors zero)\n";
        return 0;
    }
    if (orders.empty()) {
        err << "error: could not estimate an order\n";
        return 1;
    }
    double mean = 0.0;
    for (double o : orders) mean += o;
    mean /= static_cast<double>(orders.size());
    out << "observed order: " << fmt(mean) << "\n";
    return (mean >= 1.8 && mean <= 2.2) ? 0 : 1;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"sine-series simulator for memory-damped Schrodinger equations"};
    app.require_subcommand(1);

    CommonArgs check_args, run_args, conv_args;
    std::vector<std::string> compare_paths;
    int halvings_flag = 0;

    CLI::App* check = app.add_subcommand("check-kernel", "verify kernel hypotheses");
    add_common(check, check_args, true);

    CLI::App* runc = app.add_subcommand("run", "run a simulation and write artifacts");
    add_common(runc, run_args, true);

    CLI::App* compare = app.add_subcommand("compare", "fit and order decay rates of traces");
    compare->add_option("traces", compare_paths, "trace CSV files")->required();

    CLI::App* conv = app.add_subcommand("convergence", "single-mode observed-order study");
    add_common(conv, conv_args, true);
    conv->add_option("--halvings", halvings_flag, "number of dt halvings (>= 3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (check->parsed()) return cmd_check_kernel(check_args, out);
        if (runc->parsed()) return cmd_run(run_args, out, err);
        if (compare->parsed()) return cmd_compare(compare_paths, out, err);
        if (conv->parsed()) return cmd_convergence(conv_args, halvings_flag, out, err);
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("memschrod");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace memschrod
