#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "memschrod/analysis.hpp"
#include "memschrod/solver.hpp"
#include "oracles.hpp"

using namespace memschrod;
using std::numbers::pi;

namespace {

Profile single_mode(int j, double L, Complex amp) {
    return [=](double x) { return amp * std::sin(2.0 * pi * j * x / L); };
}

SimulationConfig base_config(EquationVariant eq, KernelSpec kernel) {
    SimulationConfig cfg;
    cfg.equation = eq;
    cfg.kernel = kernel;
    cfg.modes = 4;
    cfg.dt = 0.05;
    cfg.steps = 100;
    cfg.history_steps = 200;
    cfg.energy_stride = 10;
    cfg.initial = InitialHistory::soliton(
        4.0, 7.0, InitialHistory::soliton_default_width(4.0, 7.0), 0.4);
    return cfg;
}

std::vector<std::vector<Complex>> random_history(int K, int M, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<std::vector<Complex>> h(K, std::vector<Complex>(M + 1));
    for (auto& seq : h)
        for (auto& v : seq) v = Complex(uni(rng), uni(rng));
    return h;
}

} // namespace

TEST_CASE("precomputed weights sample f and g on the step grid") {
    const MemoryWeights we = precompute_weights(KernelSpec::exponential(1.0, 1.0), 0.1, 5);
    CHECK(we.f[0] == doctest::Approx(1.0));
    CHECK(we.f[3] == doctest::Approx(std::exp(-0.3)));
    CHECK(we.g[2] == doctest::Approx(std::exp(-0.2)));

    const MemoryWeights wp = precompute_weights(KernelSpec::polynomial(3.0, 4.0), 1.0, 3);
    CHECK(wp.f[1] == doctest::Approx(0.125));
    CHECK(wp.g[1] == doctest::Approx(3.0 / 16.0));

    const MemoryWeights wn = precompute_weights(KernelSpec::none(), 0.1, 4);
    for (double v : wn.f) CHECK(v == 0.0);
    for (double v : wn.g) CHECK(v == 0.0);
}

TEST_CASE("memory sum vanishes for zero state and zero kernel") {
    SimulationConfig cfg = base_config(EquationVariant::ZerothOrderMemory,
                                       KernelSpec::exponential(2.0, 1.0));
    cfg.modes = 2;
    cfg.history_steps = 8;
    const MemoryWeights weights =
        precompute_weights(cfg.kernel, cfg.dt, cfg.effective_history());
    const auto zero = std::vector<std::vector<Complex>>(
        2, std::vector<Complex>(9, Complex(0, 0)));
    const ModalState state = ModalState::from_modal_history(cfg, zero);
    CHECK(memory_sum(state, cfg, weights, 1, Complex(0, 0)) == Complex(0, 0));

    SimulationConfig none = base_config(EquationVariant::NoMemory, KernelSpec::none());
    none.modes = 2;
    const MemoryWeights wn = precompute_weights(none.kernel, none.dt, 0);
    const ModalState sn = ModalState::initialize(none);
    CHECK(memory_sum(sn, none, wn, 1, Complex(3, 4)) == Complex(0, 0));
}

TEST_CASE("zero state stays zero") {
    SimulationConfig cfg = base_config(EquationVariant::LaplacianMemory,
                                       KernelSpec::exponential(100.0, 1.0));
    cfg.initial = InitialHistory::constant_profile([](double) { return Complex(0, 0); });
    const RunResult r = run(cfg);
    for (int k = 1; k <= cfg.modes; ++k) CHECK(r.final_state.amplitude(k) == Complex(0, 0));
    for (const TraceRow& row : r.trace.rows) CHECK(row.E == 0.0);
}

TEST_CASE("no-memory stepping is unitary per mode and per step") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uni(0.1, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        SimulationConfig cfg;
        cfg.equation = EquationVariant::NoMemory;
        cfg.kernel = KernelSpec::none();
        cfg.modes = 5;
        cfg.length = uni(rng);
        cfg.dispersion = uni(rng);
        cfg.dt = 0.01 * uni(rng);
        cfg.steps = 25;
        cfg.energy_stride = 25;
        cfg.initial = InitialHistory::constant_profile(
            single_mode(1 + trial % 5, cfg.length, Complex(uni(rng), uni(rng))));
        const MemoryWeights weights = precompute_weights(cfg.kernel, cfg.dt, 0);
        ModalState state = ModalState::initialize(cfg);
        for (int n = 0; n < cfg.steps; ++n) {
            std::vector<double> before(cfg.modes);
            for (int k = 1; k <= cfg.modes; ++k) before[k - 1] = std::abs(state.amplitude(k));
            step(state, cfg, weights);
            for (int k = 1; k <= cfg.modes; ++k) {
                const double after = std::abs(state.amplitude(k));
                if (before[k - 1] > 0.0)
                    CHECK(std::abs(after / before[k - 1] - 1.0) < 1e-13);
            }
        }
    }
}

TEST_CASE("modes are decoupled") {
    SimulationConfig cfg = base_config(EquationVariant::LaplacianMemory,
                                       KernelSpec::exponential(50.0, 2.0));
    cfg.modes = 8;
    cfg.history_steps = 64;
    cfg.steps = 40;
    const auto history = random_history(cfg.modes, cfg.effective_history(), 7);
    const MemoryWeights weights =
        precompute_weights(cfg.kernel, cfg.dt, cfg.effective_history());

    ModalState full = ModalState::from_modal_history(cfg, history);
    for (int n = 0; n < cfg.steps; ++n) step(full, cfg, weights);

    for (int k = 1; k <= cfg.modes; ++k) {
        auto isolated = std::vector<std::vector<Complex>>(
            cfg.modes,
            std::vector<Complex>(cfg.effective_history() + 1, Complex(0, 0)));
        isolated[k - 1] = history[k - 1];
        ModalState solo = ModalState::from_modal_history(cfg, isolated);
        for (int n = 0; n < cfg.steps; ++n) step(solo, cfg, weights);
        const Complex a = full.amplitude(k);
        const Complex b = solo.amplitude(k);
        CHECK(std::abs(a - b) <= 1e-14 * std::abs(a));
    }
}

TEST_CASE("runs are linear in the initial data") {
    SimulationConfig cfg = base_config(EquationVariant::ZerothOrderMemory,
                                       KernelSpec::exponential(20.0, 1.0));
    cfg.steps = 60;
    const Complex alpha(0.37, -1.21);
    SimulationConfig scaled = cfg;
    scaled.initial = InitialHistory::constant_profile([&](double x) {
        const InitialHistory& base = cfg.initial;
        return alpha * base(x, 0.0);
    });
    const RunResult r1 = run(cfg);
    const RunResult r2 = run(scaled);
    for (int k = 1; k <= cfg.modes; ++k) {
        const Complex want = alpha * r1.final_state.amplitude(k);
        const Complex got = r2.final_state.amplitude(k);
        CHECK(std::abs(got - want) <= 1e-10 * std::abs(want));
    }
}

TEST_CASE("recursion fast path tracks the direct sum over 1000 steps") {
    SimulationConfig cfg = base_config(EquationVariant::ZerothOrderMemory,
                                       KernelSpec::exponential(17.3, 1.0));
    cfg.modes = 4;
    cfg.steps = 1000;
    cfg.history_steps = 400;
    const auto history = random_history(cfg.modes, cfg.effective_history(), 2024);
    const MemoryWeights weights =
        precompute_weights(cfg.kernel, cfg.dt, cfg.effective_history());

    ModalState fast = ModalState::from_modal_history(cfg, history);
    Stepper recursion(cfg, weights, StepOptions{Exec::Serial, MemoryPath::Recursion, false});
    double worst = 0.0;
    for (int n = 0; n < cfg.steps; ++n) {
        recursion.advance(fast);
        for (int k = 1; k <= cfg.modes; ++k) {
            // direct sum over the very same ring the accumulator claims to track
            Complex direct(0.0, 0.0);
            for (int m = 1; m <= cfg.effective_history(); ++m)
                direct += cfg.dt * weights.f[m] * fast.midpoint(k, m);
            const Complex acc = *fast.memory_accumulator(k);
            worst = std::max(worst, std::abs(acc - direct) / std::abs(direct));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("direct and recursion paths yield the same trajectory") {
    SimulationConfig cfg = base_config(EquationVariant::LaplacianMemory,
                                       KernelSpec::exponential(10000.0, 1.0));
    cfg.steps = 200;
    const RunResult direct = run(cfg, RunOptions{Exec::Parallel, MemoryPath::Direct, false});
    const RunResult fast = run(cfg, RunOptions{Exec::Parallel, MemoryPath::Recursion, false});
    for (int k = 1; k <= cfg.modes; ++k) {
        const Complex a = direct.final_state.amplitude(k);
        const Complex b = fast.final_state.amplitude(k);
        CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
    }
    CHECK_THROWS_AS(run(base_config(EquationVariant::ZerothOrderMemory,
                                    KernelSpec::polynomial(5.0, 4.0)),
                        RunOptions{Exec::Serial, MemoryPath::Recursion, false}),
                    std::invalid_argument);
}

TEST_CASE("serial and parallel stepping are identical") {
    SimulationConfig cfg = base_config(EquationVariant::ZerothOrderMemory,
                                       KernelSpec::polynomial(100.0, 4.0));
    cfg.modes = 16;
    cfg.steps = 120;
    const RunResult serial = run(cfg, RunOptions{Exec::Serial, MemoryPath::Auto, false});
    const RunResult parallel = run(cfg, RunOptions{Exec::Parallel, MemoryPath::Auto, false});
    for (int k = 1; k <= cfg.modes; ++k)
        CHECK(serial.final_state.amplitude(k) == parallel.final_state.amplitude(k));
    REQUIRE(serial.trace.rows.size() == parallel.trace.rows.size());
    for (std::size_t j = 0; j < serial.trace.rows.size(); ++j)
        CHECK(serial.trace.rows[j].E == parallel.trace.rows[j].E);
}

TEST_CASE("scheme trajectory matches the local-system RK4 oracle") {
    // weak kernel isolates the quadrature from the dispersion error
    SimulationConfig cfg;
    cfg.length = 2.0 * pi;   // mu_1 = 1
    cfg.dispersion = 1.0;
    cfg.equation = EquationVariant::ZerothOrderMemory;
    cfg.kernel = KernelSpec::exponential(0.01, 1.0);
    cfg.modes = 1;
    cfg.dt = 1e-4;
    cfg.steps = 100000;                  // T = 10
    cfg.history_steps = 400000;          // horizon far beyond the kernel tail
    cfg.energy_stride = 10000;
    cfg.initial = InitialHistory::constant_profile(
        single_mode(1, cfg.length, Complex(1.0, 0.0)));

    std::vector<Complex> traj;
    const RunResult result = run(cfg, RunOptions{},
                                 [&](double, const ModalState& st) {
                                     traj.push_back(st.amplitude(1));
                                 });
    const oracles::AugmentedOde ode{cfg.dispersion, cfg.mu(1), 1.0,
                                    cfg.kernel.amplitude(), cfg.kernel.exponent()};
    const std::vector<Complex> ref = oracles::rk4_augmented(
        ode, Complex(1.0, 0.0), cfg.steps * cfg.dt, cfg.dt / 100.0,
        static_cast<long>(cfg.energy_stride) * 100);
    REQUIRE(traj.size() == ref.size());
    double scale = 0.0, err = 0.0;
    for (std::size_t j = 0; j < traj.size(); ++j) {
        scale = std::max(scale, std::abs(ref[j]));
        err = std::max(err, std::abs(traj[j] - ref[j]));
    }
    CHECK(err / scale < 1e-5);
    // the memory genuinely acts: the amplitude has decayed measurably
    CHECK(std::abs(result.final_state.amplitude(1)) < 0.96);
}

TEST_CASE("halving dt divides the oracle error by about four") {
    const double T = 1.0;
    const oracles::AugmentedOde ode{1.0, 4.0 * pi * pi, 1.0, 0.5, 1.0};
    std::vector<double> errors;
    for (int level = 0; level <= 3; ++level) {
        SimulationConfig cfg;
        cfg.equation = EquationVariant::ZerothOrderMemory;
        cfg.kernel = KernelSpec::exponential(0.5, 1.0);
        cfg.modes = 1;
        cfg.dt = 0.01 / (1 << level);
        cfg.steps = static_cast<int>(std::lround(T / cfg.dt));
        cfg.history_steps = static_cast<int>(std::lround(40.0 / cfg.dt));
        cfg.energy_stride = cfg.steps;
        cfg.initial = InitialHistory::constant_profile(
            single_mode(1, 1.0, Complex(1.0, 0.0)));
        const RunResult r = run(cfg);
        const Complex ref =
            oracles::rk4_augmented_final(ode, Complex(1.0, 0.0), T, cfg.dt / 100.0);
        errors.push_back(std::abs(r.final_state.amplitude(1) - ref));
    }
    for (int i = 0; i < 3; ++i) {
        const double ratio = errors[i] / errors[i + 1];
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
    }
}

TEST_CASE("substituting the update back into the scheme leaves no residual") {
    SimulationConfig cfg = base_config(EquationVariant::ZerothOrderMemory,
                                       KernelSpec::exponential(2.0, 1.0));
    cfg.steps = 50;
    const MemoryWeights weights =
        precompute_weights(cfg.kernel, cfg.dt, cfg.effective_history());
    ModalState state = ModalState::initialize(cfg);
    Stepper stepper(cfg, weights, StepOptions{Exec::Serial, MemoryPath::Direct, true});
    const int M = cfg.effective_history();
    for (int n = 0; n < cfg.steps; ++n) {
        const std::vector<Complex> before = state.amplitudes();
        std::vector<Complex> past(cfg.modes, Complex(0, 0));
        for (int k = 1; k <= cfg.modes; ++k)
            for (int m = 1; m <= M; ++m)
                past[k - 1] += cfg.dt * weights.f[m] * state.midpoint(k, m);
        stepper.advance(state);
        // literal form of the contract at moderate parameters
        for (int k = 1; k <= cfg.modes; ++k) {
            const Complex b0 = before[k - 1];
            const Complex b1 = state.amplitude(k);
            const Complex mid = 0.5 * (b0 + b1);
            const Complex msum = cfg.dt * weights.f[0] * mid + past[k - 1];
            const Complex lhs = Complex(0, 1) * (b1 - b0) / cfg.dt -
                                cfg.dispersion * cfg.mu(k) * mid +
                                Complex(0, 1) * cfg.memory_weight(k) * msum;
            CHECK(std::abs(lhs) * cfg.dt <= 1e-12 * (std::abs(b0) + std::abs(b1)));
        }
    }
    CHECK(stepper.max_residual() < 1e-12);
}

TEST_CASE("empty runs emit exactly the initial sample") {
    SimulationConfig cfg = base_config(EquationVariant::ZerothOrderMemory,
                                       KernelSpec::exponential(1.0, 1.0));
    cfg.steps = 0;
    const RunResult r = run(cfg);
    REQUIRE(r.trace.rows.size() == 1);
    CHECK(r.trace.rows[0].t == 0.0);
    CHECK(r.trace.rows[0].E > 0.0);
}

TEST_CASE("strong exponential damping decays monotonically") {
    SimulationConfig cfg = base_config(EquationVariant::ZerothOrderMemory,
                                       KernelSpec::exponential(10000.0, 1.0));
    cfg.modes = 8;
    cfg.steps = 400;
    cfg.history_steps = 800;
    cfg.energy_stride = 50;
    const RunResult r = run(cfg);
    for (std::size_t j = 0; j + 1 < r.trace.rows.size(); ++j)
        CHECK(r.trace.rows[j + 1].E < r.trace.rows[j].E);
}

TEST_CASE("divergence is reported with a step index") {
    SimulationConfig cfg = base_config(EquationVariant::NoMemory, KernelSpec::none());
    cfg.initial = InitialHistory::constant_profile([](double x) {
        return x < 0.5 ? Complex(std::nan(""), 0.0) : Complex(0.0, 0.0);
    });
    bool caught = false;
    try {
        run(cfg);
    } catch (const DivergenceError& e) {
        caught = true;
        CHECK(e.step == 100);
    }
    CHECK(caught);
}

TEST_CASE("config invariants are enforced") {
    SimulationConfig cfg = base_config(EquationVariant::NoMemory, KernelSpec::none());
    cfg.kernel = KernelSpec::exponential(1.0, 1.0);   // variant mismatch
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = base_config(EquationVariant::ZerothOrderMemory, KernelSpec::exponential(1.0, 1.0));
    cfg.history_steps = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = base_config(EquationVariant::NoMemory, KernelSpec::none());
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    // hypothesis gate on run()
    SimulationConfig bad = base_config(EquationVariant::ZerothOrderMemory,
                                       KernelSpec::polynomial(10.0, 2.0));
    CHECK_THROWS_AS(run(bad), std::invalid_argument);
}

TEST_CASE("eta accessor reproduces the accumulated window sums") {
    SimulationConfig cfg = base_config(EquationVariant::ZerothOrderMemory,
                                       KernelSpec::exponential(5.0, 1.0));
    cfg.modes = 3;
    cfg.history_steps = 12;
    cfg.steps = 9;
    const auto history = random_history(cfg.modes, cfg.effective_history(), 5);
    const MemoryWeights weights =
        precompute_weights(cfg.kernel, cfg.dt, cfg.effective_history());
    ModalState state = ModalState::from_modal_history(cfg, history);

    // record every amplitude as the run advances
    std::vector<std::vector<Complex>> records(cfg.modes);
    for (int k = 0; k < cfg.modes; ++k) {
        records[k].assign(history[k].rbegin(), history[k].rend());   // B^{-M}..B^0
    }
    for (int n = 0; n < cfg.steps; ++n) {
        step(state, cfg, weights);
        for (int k = 1; k <= cfg.modes; ++k)
            records[k - 1].push_back(state.amplitude(k));
    }
    for (int k = 1; k <= cfg.modes; ++k) {
        const auto& rec = records[k - 1];
        const int n = static_cast<int>(rec.size()) - 1;
        for (int m = 0; m <= cfg.effective_history(); ++m) {
            Complex eta(0, 0);
            for (int l = n - m; l <= n; ++l) eta += cfg.dt * rec[l];
            CHECK(std::abs(state.eta(k, m) - eta) <= 1e-13 * (1.0 + std::abs(eta)));
        }
    }
}
