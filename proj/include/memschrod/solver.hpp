#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "memschrod/exec.hpp"
#include "memschrod/kernel.hpp"
#include "memschrod/spectral.hpp"
#include "memschrod/trace.hpp"

namespace memschrod {

enum class EquationVariant { NoMemory, LaplacianMemory, ZerothOrderMemory };

const char* to_string(EquationVariant equation);

struct SimulationConfig {
    double length = 1.0;                                  // L
    double dispersion = 1.0;                              // a
    EquationVariant equation = EquationVariant::NoMemory;
    KernelSpec kernel = KernelSpec::none();
    int modes = 16;                                       // K
    double dt = 0.05;
    int steps = 4000;                                     // forward steps N
    int history_steps = -1;                               // memory window; -1 -> steps
    InitialHistory initial = InitialHistory();
    int energy_stride = 100;
    int quad_points = -1;                                 // -1 -> max(4K, 4096)

    int effective_history() const;
    int effective_quad_points() const;
    /// 4 pi^2 k^2 / L^2 for mode k = 1..K.
    double mu(int k) const;
    /// memory coefficient: mu(k), 1, or 0 by variant.
    double memory_weight(int k) const;

    void validate() const;   // throws std::invalid_argument
};

/// f^m = f(m dt), g^m = g(m dt) for m = 0..history_steps, cached per run.
struct MemoryWeights {
    std::vector<double> f;
    std::vector<double> g;
};

MemoryWeights precompute_weights(const KernelSpec& kernel, double dt, int history_steps);

enum class MemoryPath {
    Auto,        // Recursion for exponential kernels, Direct otherwise
    Direct,      // O(N_hist) sum per mode per step
    Recursion    // O(1) semigroup update, exponential kernels only
};

struct DivergenceError : std::runtime_error {
    explicit DivergenceError(int at_step);
    int step;
};

/// Per-mode amplitudes plus the memory bookkeeping: a ring of the midpoint
/// values B^{l+1/2} (convolution input) and a ring of prefix sums
/// C^j = sum_{l<=j} dt B^l extended over the initial history, from which
/// eta^{m,n} = C^n - C^{n-m-1} exactly.
class ModalState {
public:
    static ModalState initialize(const SimulationConfig& config);
    /// history[k][j] = B_k(-j dt), j = 0..N_hist (modal initial data).
    static ModalState from_modal_history(const SimulationConfig& config,
                                         const std::vector<std::vector<Complex>>& history);

    int step_index() const { return step_; }
    int modes() const { return modes_; }
    int history_length() const { return hist_; }
    double dt() const { return dt_; }

    Complex amplitude(int k) const;                     // B_k^n, k = 1..K
    const std::vector<Complex>& amplitudes() const { return amps_; }
    ModalCoefficients coefficients(double length) const;

    Complex midpoint(int k, int m) const;               // B_k^{n-m+1/2}, m = 1..N_hist
    Complex eta(int k, int m) const;                    // eta_k^{m,n},    m = 0..N_hist
    std::optional<Complex> memory_accumulator(int k) const;

    bool all_finite() const;

private:
    friend class Stepper;
    ModalState() = default;

    int slot_mid(int m) const;   // physical slot of midpoint m steps back
    int slot_pre(int j) const;   // physical slot of C^{n-j}

    int step_ = 0;
    int modes_ = 0;
    int hist_ = 0;
    double dt_ = 0.0;
    std::vector<Complex> amps_;     // B_k^n
    std::vector<Complex> mids_;     // mode-major ring, hist_ slots per mode
    std::vector<Complex> prefix_;   // mode-major ring, hist_ + 2 slots per mode
    std::vector<Complex> accum_;    // recursion accumulators S_k (may be empty)
    int mid_head_ = 0;              // slot of B^{n-1+1/2}
    int pre_head_ = 0;              // slot of C^n
};

struct StepOptions {
    Exec exec = Exec::Parallel;
    MemoryPath path = MemoryPath::Auto;
    bool check_residuals = false;   // forces serial stepping
};

/// Advances a bound (config, weights) pair one step at a time. Mode updates
/// are independent; the parallel and serial paths are bitwise identical.
class Stepper {
public:
    Stepper(const SimulationConfig& config, const MemoryWeights& weights,
            StepOptions options = {});

    void advance(ModalState& state) const;
    bool uses_recursion() const { return recursion_; }
    /// Largest scaled residual seen so far (residual checking only).
    double max_residual() const { return max_residual_; }

private:
    Complex past_memory_sum(const ModalState& state, int k) const;

    const SimulationConfig& config_;
    const MemoryWeights& weights_;
    StepOptions options_;
    bool recursion_ = false;
    double decay_ratio_ = 0.0;          // e^{-q1 dt}
    std::vector<Complex> mult_;          // homogeneous update multiplier
    std::vector<Complex> memc_;          // memory-term coefficient -w_k / D_k
    std::vector<double> wmode_;          // w_k
    mutable double max_residual_ = 0.0;
};

/// Memory sum dt f^0 (candidate + B_k^n)/2 + sum_{m>=1} dt f^m B^{n-m+1/2}.
Complex memory_sum(const ModalState& state, const SimulationConfig& config,
                   const MemoryWeights& weights, int k, Complex candidate);

void step(ModalState& state, const SimulationConfig& config,
          const MemoryWeights& weights, const StepOptions& options = {});

struct RunOptions {
    Exec exec = Exec::Parallel;
    MemoryPath path = MemoryPath::Auto;
    bool check_residuals = false;
};

struct RunResult {
    ModalState final_state;
    EnergyTrace trace;
};

using SampleObserver = std::function<void(double t, const ModalState& state)>;

/// Full run: projects the initial history, advances `steps` steps, samples
/// the discrete energy every energy_stride steps (step 0 included), checks
/// for divergence every 100 steps. Deterministic for a fixed config.
/// Throws std::invalid_argument when the kernel hypotheses fail.
RunResult run(const SimulationConfig& config, const RunOptions& options = {},
              const SampleObserver& observer = nullptr);

} // namespace memschrod
