// Timing comparison of the serial reference path against the OpenMP path,
// for both memory-sum variants, plus the energy evaluation. The two paths
// must produce identical trajectories; this also cross-checks that here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "memschrod/analysis.hpp"
#include "memschrod/solver.hpp"

using namespace memschrod;
using h_clock = std::chrono::high_resolution_clock;

namespace {

double seconds_since(h_clock::time_point t0) {
    return std::chrono::duration<double>(h_clock::now() - t0).count();
}

SimulationConfig make_config(int modes, int steps, int history, MemoryPath) {
    SimulationConfig cfg;
    cfg.length = 1.0;
    cfg.dispersion = 1.0;
    cfg.equation = EquationVariant::ZerothOrderMemory;
    cfg.kernel = KernelSpec::exponential(10000.0, 1.0);
    cfg.modes = modes;
    cfg.dt = 0.05;
    cfg.steps = steps;
    cfg.history_steps = history;
    cfg.energy_stride = steps;   // one sample at each end
    cfg.initial = InitialHistory::soliton(
        4.0, 7.0, InitialHistory::soliton_default_width(4.0, 7.0), 0.4);
    return cfg;
}

struct Timing {
    double step_time = 0.0;
    double energy_time = 0.0;
    Complex checksum;
};

Timing time_run(const SimulationConfig& cfg, Exec exec, MemoryPath path) {
    const MemoryWeights weights =
        precompute_weights(cfg.kernel, cfg.dt, cfg.effective_history());
    ModalState state = ModalState::initialize(cfg);
    Stepper stepper(cfg, weights, StepOptions{exec, path, false});

    Timing t;
    auto t0 = h_clock::now();
    for (int n = 0; n < cfg.steps; ++n) stepper.advance(state);
    t.step_time = seconds_since(t0);

    t0 = h_clock::now();
    double e = 0.0;
    for (int rep = 0; rep < 5; ++rep) e = discrete_energy(state, cfg, weights, exec);
    t.energy_time = seconds_since(t0) / 5;

    Complex sum(0.0, 0.0);
    for (int k = 1; k <= cfg.modes; ++k) sum += state.amplitude(k);
    t.checksum = sum + Complex(e, 0.0) * 0.0;
    return t;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both paths run serially\n");
#endif

    struct Case {
        const char* name;
        int modes, steps, history;
        MemoryPath path;
    };
    const Case cases[] = {
        {"direct  K=64  N=400  M=4000", 64, 400, 4000, MemoryPath::Direct},
        {"direct  K=256 N=200  M=4000", 256, 200, 4000, MemoryPath::Direct},
        {"recursion K=1024 N=2000 M=4000", 1024, 2000, 4000, MemoryPath::Recursion},
    };

    std::printf("%-34s %12s %12s %9s %14s\n", "case", "serial [s]", "openmp [s]",
                "speedup", "energy xcheck");
    for (const Case& c : cases) {
        const SimulationConfig cfg = make_config(c.modes, c.steps, c.history, c.path);
        const Timing serial = time_run(cfg, Exec::Serial, c.path);
        const Timing parallel = time_run(cfg, Exec::Parallel, c.path);
        const double diff = std::abs(serial.checksum - parallel.checksum);
        std::printf("%-34s %12.4f %12.4f %8.2fx %14.3g\n", c.name, serial.step_time,
                    parallel.step_time, serial.step_time / parallel.step_time, diff);
        if (diff != 0.0) {
            std::printf("  MISMATCH: serial and parallel paths differ\n");
            return 1;
        }
    }

    // energy evaluation scaling
    const SimulationConfig cfg = make_config(256, 1, 20000, MemoryPath::Direct);
    const MemoryWeights weights =
        precompute_weights(cfg.kernel, cfg.dt, cfg.effective_history());
    ModalState state = ModalState::initialize(cfg);
    auto t0 = h_clock::now();
    const double e_serial = discrete_energy(state, cfg, weights, Exec::Serial);
    const double ts = seconds_since(t0);
    t0 = h_clock::now();
    const double e_parallel = discrete_energy(state, cfg, weights, Exec::Parallel);
    const double tp = seconds_since(t0);
    std::printf("energy  K=256 M=20000              %12.4f %12.4f %8.2fx %14.3g\n", ts,
                tp, ts / tp, std::abs(e_serial - e_parallel));
    return e_serial == e_parallel ? 0 : 1;
}
