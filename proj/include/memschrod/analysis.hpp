#pragma once

#include <utility>

#include "memschrod/exec.hpp"
#include "memschrod/kernel.hpp"
#include "memschrod/solver.hpp"
#include "memschrod/trace.hpp"

namespace memschrod {

/// Discrete energy of the current state:
///   (L/4) [ sum_k |B_k^n|^2
///         + sum_k sum_{m=1}^{N_hist} dt w_k g^m |eta_k^{m,n}|^2 ]
/// with w_k = 4 pi^2 k^2 / L^2 (Laplacian memory) or 1 (zeroth order).
/// For the zero kernel this is exactly half of parseval_l2.
double discrete_energy(const ModalState& state, const SimulationConfig& config,
                       const MemoryWeights& weights, Exec exec = Exec::Parallel);

struct DissipativityCheck {
    bool pass = true;
    int first_violation = -1;    // row index of the first increase
    double worst_ratio = 0.0;    // max over samples of E_{j+1}/E_j - 1
};

/// Passes iff E(t_{j+1}) <= E(t_j) (1 + tol) for all consecutive samples.
DissipativityCheck check_dissipativity(const EnergyTrace& trace, double tol);

enum class FitModel { Exponential, Power };

struct DecayFit {
    FitModel model = FitModel::Exponential;
    double rate = 0.0;      // gamma for E ~ e^{-gamma t}, rho for E ~ t^{-rho}
    double r2 = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    int samples = 0;
};

/// Least-squares line on (t, ln E) or (ln t, ln E) over the window
/// [t_lo, t_hi]. Requires at least 10 samples and positive energies there.
DecayFit fit_decay(const EnergyTrace& trace, FitModel model, double t_lo, double t_hi);

/// Default window: the last `fraction` of the trace (transient skipped).
std::pair<double, double> default_fit_window(const EnergyTrace& trace,
                                             double fraction = 0.6);

/// Closed-form scale calibration: picks alpha so the envelope matches the
/// measured energy at the sample nearest to (and not before) anchor_t.
DecayEnvelope calibrate_envelope(const EnergyTrace& trace, DecayBranch branch,
                                 double p, int order, double anchor_t);

/// max over samples with t >= anchor_t of E(t) / envelope(t); a value
/// <= 1 + tol certifies the trace respects the calibrated envelope.
double compare_envelope(const EnergyTrace& trace, const DecayEnvelope& envelope,
                        double anchor_t);

} // namespace memschrod
