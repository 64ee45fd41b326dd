#include "memschrod/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "memschrod/analysis.hpp"

namespace memschrod {

const char* to_string(EquationVariant equation) {
    switch (equation) {
        case EquationVariant::NoMemory: return "no-memory";
        case EquationVariant::LaplacianMemory: return "laplacian";
        case EquationVariant::ZerothOrderMemory: return "zeroth-order";
    }
    return "?";
}

int SimulationConfig::effective_history() const {
    if (equation == EquationVariant::NoMemory) return 0;
    return history_steps < 0 ? steps : history_steps;
}

int SimulationConfig::effective_quad_points() const {
    return quad_points > 0 ? quad_points : std::max(4 * modes, 4096);
}

double SimulationConfig::mu(int k) const {
    const double f = 2.0 * std::numbers::pi * k / length;
    return f * f;
}

double SimulationConfig::memory_weight(int k) const {
    switch (equation) {
        case EquationVariant::LaplacianMemory: return mu(k);
        case EquationVariant::ZerothOrderMemory: return 1.0;
        case EquationVariant::NoMemory: return 0.0;
    }
    return 0.0;
}

void SimulationConfig::validate() const {
    if (!(length > 0.0)) throw std::invalid_argument("config: length must be positive");
    if (!(dispersion > 0.0)) throw std::invalid_argument("config: dispersion must be positive");
    if (modes < 1) throw std::invalid_argument("config: need at least one mode");
    if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
    if (steps < 0) throw std::invalid_argument("config: steps must be >= 0");
    if (energy_stride < 1) throw std::invalid_argument("config: energy stride must be >= 1");
    const bool no_memory = equation == EquationVariant::NoMemory;
    const bool no_kernel = kernel.family() == KernelFamily::None;
    if (no_memory != no_kernel)
        throw std::invalid_argument("config: no-memory equation iff kernel is none");
    if (!no_memory && effective_history() < 1)
        throw std::invalid_argument("config: memory runs need history_steps >= 1");
}

MemoryWeights precompute_weights(const KernelSpec& kernel, double dt, int history_steps) {
    MemoryWeights w;
    w.f.resize(history_steps + 1);
    w.g.resize(history_steps + 1);
    for (int m = 0; m <= history_steps; ++m) {
        w.f[m] = kernel.f(m * dt);
        w.g[m] = kernel.g(m * dt);
    }
    return w;
}

DivergenceError::DivergenceError(int at_step)
    : std::runtime_error("solution diverged (NaN/Inf) by step " + std::to_string(at_step)),
      step(at_step) {}

// --------------------------------------------------------------------------
// ModalState

int ModalState::slot_mid(int m) const {
    int s = mid_head_ - (m - 1);
    if (s < 0) s += hist_;
    return s;
}

int ModalState::slot_pre(int j) const {
    const int len = hist_ + 2;
    int s = pre_head_ - j;
    while (s < 0) s += len;
    return s;
}

Complex ModalState::amplitude(int k) const { return amps_[k - 1]; }

ModalCoefficients ModalState::coefficients(double length) const {
    return ModalCoefficients{amps_, length};
}

Complex ModalState::midpoint(int k, int m) const {
    return mids_[static_cast<std::size_t>(k - 1) * hist_ + slot_mid(m)];
}

Complex ModalState::eta(int k, int m) const {
    const std::size_t base = static_cast<std::size_t>(k - 1) * (hist_ + 2);
    return prefix_[base + slot_pre(0)] - prefix_[base + slot_pre(m + 1)];
}

std::optional<Complex> ModalState::memory_accumulator(int k) const {
    if (accum_.empty()) return std::nullopt;
    return accum_[k - 1];
}

bool ModalState::all_finite() const {
    for (const Complex& b : amps_)
        if (!std::isfinite(b.real()) || !std::isfinite(b.imag())) return false;
    return true;
}

ModalState ModalState::from_modal_history(const SimulationConfig& config,
                                          const std::vector<std::vector<Complex>>& history) {
    config.validate();
    const int K = config.modes;
    const int M = config.effective_history();
    if (static_cast<int>(history.size()) != K)
        throw std::invalid_argument("modal history: one sequence per mode expected");
    for (const auto& h : history)
        if (static_cast<int>(h.size()) != M + 1)
            throw std::invalid_argument("modal history: need N_hist + 1 samples per mode");

    ModalState st;
    st.step_ = 0;
    st.modes_ = K;
    st.hist_ = M;
    st.dt_ = config.dt;
    st.amps_.resize(K);
    for (int k = 0; k < K; ++k) st.amps_[k] = history[k][0];

    if (M > 0) {
        st.mids_.resize(static_cast<std::size_t>(K) * M);
        st.prefix_.resize(static_cast<std::size_t>(K) * (M + 2));
        st.mid_head_ = M - 1;    // slot of mid one step back
        st.pre_head_ = M + 1;    // slot of C^0
        for (int k = 0; k < K; ++k) {
            const auto& h = history[k];
            Complex* mids = &st.mids_[static_cast<std::size_t>(k) * M];
            Complex* pre = &st.prefix_[static_cast<std::size_t>(k) * (M + 2)];
            // mid[-m + 1/2] = (B^{-m+1} + B^{-m})/2 lives m steps back
            for (int m = 1; m <= M; ++m)
                mids[st.mid_head_ - (m - 1)] = 0.5 * (h[m - 1] + h[m]);
            // C^{-M-1} = 0, C^j = C^{j-1} + dt B^j for j = -M..0
            pre[0] = Complex(0.0, 0.0);
            for (int j = -M; j <= 0; ++j)
                pre[j + M + 1] = pre[j + M] + config.dt * h[-j];
        }
    }
    return st;
}

ModalState ModalState::initialize(const SimulationConfig& config) {
    config.validate();
    const int K = config.modes;
    const int M = config.effective_history();
    const int Q = config.effective_quad_points();
    const auto& y0 = config.initial;

    std::vector<std::vector<Complex>> history(K, std::vector<Complex>(M + 1));
    if (y0.constant_in_time()) {
        const ModalCoefficients c =
            project([&](double x) { return y0(x, 0.0); }, K, config.length, Q);
        for (int k = 0; k < K; ++k)
            std::fill(history[k].begin(), history[k].end(), c.values[k]);
    } else {
        for (int j = 0; j <= M; ++j) {
            const double s = j * config.dt;
            const ModalCoefficients c =
                project([&](double x) { return y0(x, s); }, K, config.length, Q);
            for (int k = 0; k < K; ++k) history[k][j] = c.values[k];
        }
    }
    return from_modal_history(config, history);
}

// --------------------------------------------------------------------------
// Stepper

Stepper::Stepper(const SimulationConfig& config, const MemoryWeights& weights,
                 StepOptions options)
    : config_(config), weights_(weights), options_(options) {
    const int K = config.modes;
    const double dt = config.dt;
    const double f0 = weights.f.empty() ? 0.0 : weights.f[0];
    mult_.resize(K);
    memc_.resize(K);
    wmode_.resize(K);
    for (int k = 1; k <= K; ++k) {
        const double w = config.memory_weight(k);
        const double half_disp = 0.5 * config.dispersion * config.mu(k);
        const double half_mem = 0.5 * dt * f0 * w;
        // i (B^{n+1}-B^n)/dt - a mu B^{n+1/2} + i w dt f^0 B^{n+1/2} + i w S_past = 0
        // => B^{n+1} = mult B^n + memc S_past  with
        const Complex denom(1.0 / dt + half_mem, half_disp);
        const Complex numer(1.0 / dt - half_mem, -half_disp);
        // |denom| >= 1/dt for admissible parameters; catches NaN/overflow input
        if (!std::isfinite(std::abs(denom)) || !(std::abs(denom) > 0.0))
            throw std::runtime_error("degenerate update coefficient for mode " +
                                     std::to_string(k));
        mult_[k - 1] = numer / denom;
        memc_[k - 1] = -w / denom;
        wmode_[k - 1] = w;
    }
    if (config.equation != EquationVariant::NoMemory &&
        config.kernel.family() == KernelFamily::Exponential &&
        options.path != MemoryPath::Direct) {
        recursion_ = true;
        decay_ratio_ = std::exp(-config.kernel.exponent() * dt);
    }
    if (options.path == MemoryPath::Recursion && !recursion_)
        throw std::invalid_argument("recursion memory path needs an exponential kernel");
}

Complex Stepper::past_memory_sum(const ModalState& state, int k) const {
    const int M = state.hist_;
    const double dt = config_.dt;
    const double* f = weights_.f.data();
    const Complex* ring = &state.mids_[static_cast<std::size_t>(k - 1) * M];
    // sum_{m=1}^{M} f^m mid[n-m]; two contiguous sweeps around the ring,
    // fixed ascending-m order for determinism
    Complex acc(0.0, 0.0);
    int m = 1;
    for (int slot = state.mid_head_; slot >= 0 && m <= M; --slot, ++m)
        acc += f[m] * ring[slot];
    for (int slot = M - 1; m <= M; --slot, ++m) acc += f[m] * ring[slot];
    return dt * acc;
}

void Stepper::advance(ModalState& state) const {
    const int K = state.modes_;
    const int M = state.hist_;
    const double dt = config_.dt;
    const bool memory = config_.equation != EquationVariant::NoMemory && M > 0;

    if (memory && recursion_ && state.accum_.empty()) {
        state.accum_.resize(K);
        for (int k = 1; k <= K; ++k) state.accum_[k - 1] = past_memory_sum(state, k);
    }

    const int new_mid_head = memory ? (state.mid_head_ + 1) % M : 0;
    const int new_pre_head = memory ? (state.pre_head_ + 1) % (M + 2) : 0;
    const bool parallel = options_.exec == Exec::Parallel && !options_.check_residuals;
    const bool check = options_.check_residuals;

#pragma omp parallel for schedule(static) if (parallel)
    for (int k = 1; k <= K; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        const Complex b = state.amps_[i];
        Complex past(0.0, 0.0);
        if (memory)
            past = recursion_ ? state.accum_[i] : past_memory_sum(state, k);
        const Complex b_new = mult_[i] * b + memc_[i] * past;
        state.amps_[i] = b_new;

        if (memory) {
            Complex* ring = &state.mids_[i * M];
            const Complex mid = 0.5 * (b_new + b);
            const Complex evicted = ring[new_mid_head];   // mid[n-M]
            ring[new_mid_head] = mid;
            Complex* pre = &state.prefix_[i * (M + 2)];
            pre[new_pre_head] = pre[state.pre_head_] + dt * b_new;
            if (recursion_) {
                state.accum_[i] = decay_ratio_ * state.accum_[i] +
                                  dt * weights_.f[1] * mid -
                                  decay_ratio_ * dt * weights_.f[M] * evicted;
            }
        }

        if (check) {
            // substitute back into the scheme; residual is rounding-level
            // relative to the participating term magnitudes
            const Complex bmid = 0.5 * (b_new + b);
            const Complex msum = dt * weights_.f[0] * bmid + (memory ? past : Complex(0, 0));
            const Complex lhs = Complex(0, 1) * (b_new - b) / dt -
                                config_.dispersion * config_.mu(k) * bmid +
                                Complex(0, 1) * wmode_[i] * msum;
            const double scale = (std::abs(b) + std::abs(b_new)) / dt +
                                 config_.dispersion * config_.mu(k) * std::abs(bmid) +
                                 wmode_[i] * std::abs(msum);
            const double r = scale > 0.0 ? std::abs(lhs) / scale : std::abs(lhs);
            max_residual_ = std::max(max_residual_, r);
        }
    }

    if (memory) {
        state.mid_head_ = new_mid_head;
        state.pre_head_ = new_pre_head;
    }
    ++state.step_;
}

Complex memory_sum(const ModalState& state, const SimulationConfig& config,
                   const MemoryWeights& weights, int k, Complex candidate) {
    if (config.equation == EquationVariant::NoMemory ||
        config.kernel.family() == KernelFamily::None)
        return Complex(0.0, 0.0);
    const Complex mid0 = 0.5 * (candidate + state.amplitude(k));
    Complex acc = config.dt * weights.f[0] * mid0;
    const int M = state.history_length();
    for (int m = 1; m <= M; ++m) acc += config.dt * weights.f[m] * state.midpoint(k, m);
    return acc;
}

void step(ModalState& state, const SimulationConfig& config,
          const MemoryWeights& weights, const StepOptions& options) {
    Stepper(config, weights, options).advance(state);
}

RunResult run(const SimulationConfig& config, const RunOptions& options,
              const SampleObserver& observer) {
    config.validate();
    if (config.kernel.family() != KernelFamily::None) {
        const HypothesisReport report = check_hypotheses(config.kernel);
        if (!report.all_ok())
            throw std::invalid_argument("kernel hypotheses violated: " + report.violation);
    }

    const MemoryWeights weights =
        precompute_weights(config.kernel, config.dt, config.effective_history());
    ModalState state = ModalState::initialize(config);
    Stepper stepper(config, weights,
                    StepOptions{options.exec, options.path, options.check_residuals});

    EnergyTrace trace;
    trace.metadata["equation"] = to_string(config.equation);
    trace.metadata["kernel"] = to_string(config.kernel.family());
    char buf[64];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        trace.metadata[key] = buf;
    };
    put("amplitude", config.kernel.amplitude());
    put("exponent", config.kernel.exponent());
    put("length", config.length);
    put("dispersion", config.dispersion);
    put("dt", config.dt);
    trace.metadata["modes"] = std::to_string(config.modes);
    trace.metadata["steps"] = std::to_string(config.steps);
    trace.metadata["history_steps"] = std::to_string(config.effective_history());
    trace.metadata["energy_stride"] = std::to_string(config.energy_stride);

    auto sample = [&](int n) {
        const double t = n * config.dt;
        const double E = discrete_energy(state, config, weights, options.exec);
        trace.rows.push_back({t, E, parseval_l2(state.coefficients(config.length))});
        if (observer) observer(t, state);
    };
    sample(0);

    for (int n = 1; n <= config.steps; ++n) {
        stepper.advance(state);
        if (n % 100 == 0 && !state.all_finite()) throw DivergenceError(n);
        if (n % config.energy_stride == 0) sample(n);
    }
    if (!state.all_finite()) throw DivergenceError(config.steps);

    return RunResult{std::move(state), std::move(trace)};
}

} // namespace memschrod
