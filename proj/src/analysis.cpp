#include "memschrod/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace memschrod {

double discrete_energy(const ModalState& state, const SimulationConfig& config,
                       const MemoryWeights& weights, Exec exec) {
    const int K = state.modes();
    const int M = state.history_length();
    const double dt = config.dt;
    const bool memory =
        config.equation != EquationVariant::NoMemory && M > 0;

    // per-mode contributions in parallel, combined in fixed index order
    std::vector<double> contrib(K, 0.0);
    const bool parallel = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (int k = 1; k <= K; ++k) {
        double c = std::norm(state.amplitude(k));
        if (memory) {
            const double w = config.memory_weight(k);
            double mem = 0.0;
            for (int m = 1; m <= M; ++m)
                mem += weights.g[m] * std::norm(state.eta(k, m));
            c += dt * w * mem;
        }
        contrib[k - 1] = c;
    }
    double total = 0.0;
    for (int k = 0; k < K; ++k) total += contrib[k];
    return 0.25 * config.length * total;
}

DissipativityCheck check_dissipativity(const EnergyTrace& trace, double tol) {
    if (trace.rows.empty())
        throw std::invalid_argument("dissipativity check needs a nonempty trace");
    DissipativityCheck out;
    for (std::size_t j = 0; j + 1 < trace.rows.size(); ++j) {
        const double a = trace.rows[j].E;
        const double b = trace.rows[j + 1].E;
        const double ratio = a != 0.0 ? b / a - 1.0 : (b > 0.0 ? 1.0 : 0.0);
        out.worst_ratio = std::max(out.worst_ratio, ratio);
        if (b > a * (1.0 + tol) && out.pass) {
            out.pass = false;
            out.first_violation = static_cast<int>(j + 1);
        }
    }
    return out;
}

DecayFit fit_decay(const EnergyTrace& trace, FitModel model, double t_lo, double t_hi) {
    std::vector<double> xs, ys;
    for (const TraceRow& row : trace.rows) {
        if (row.t < t_lo || row.t > t_hi) continue;
        if (!(row.E > 0.0))
            throw std::domain_error("fit window contains nonpositive energy");
        if (model == FitModel::Power && !(row.t > 0.0))
            throw std::domain_error("power fit window must have t > 0");
        xs.push_back(model == FitModel::Power ? std::log(row.t) : row.t);
        ys.push_back(std::log(row.E));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 10) throw std::invalid_argument("fit window must contain >= 10 samples");

    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) { sx += xs[i]; sy += ys[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("degenerate fit window");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0, ss_tot = 0;
    for (int i = 0; i < n; ++i) {
        const double pred = intercept + slope * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - my) * (ys[i] - my);
    }
    DecayFit fit;
    fit.model = model;
    fit.rate = -slope;
    fit.r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.samples = n;
    return fit;
}

std::pair<double, double> default_fit_window(const EnergyTrace& trace, double fraction) {
    if (trace.rows.empty())
        throw std::invalid_argument("cannot window an empty trace");
    const double t0 = trace.rows.front().t;
    const double t1 = trace.rows.back().t;
    return {t1 - fraction * (t1 - t0), t1};
}

namespace {

const TraceRow& anchor_row(const EnergyTrace& trace, double anchor_t) {
    if (trace.rows.empty())
        throw std::domain_error("anchor outside trace: trace is empty");
    if (anchor_t < trace.rows.front().t || anchor_t > trace.rows.back().t)
        throw std::domain_error("anchor outside trace");
    for (const TraceRow& row : trace.rows)
        if (row.t >= anchor_t) return row;
    return trace.rows.back();
}

} // namespace

DecayEnvelope calibrate_envelope(const EnergyTrace& trace, DecayBranch branch,
                                 double p, int order, double anchor_t) {
    const TraceRow& row = anchor_row(trace, anchor_t);
    if (!(row.E > 0.0))
        throw std::domain_error("cannot calibrate an envelope on nonpositive energy");
    if (!(row.t > 0.0))
        throw std::domain_error("envelope anchor must have t > 0");
    // value(t) = scale * G_n(scale/t) = c_n scale^{1+e_n} / t^{e_n}; both
    // branches are monomials so the anchor equation inverts in closed form.
    const double e_n = envelope_exponent(branch, p, order);
    const double c_n = envelope_coefficient(branch, p, order);
    DecayEnvelope env;
    env.order = order;
    env.branch = branch;
    env.p = p;
    env.scale = std::pow(row.E * std::pow(row.t, e_n) / c_n, 1.0 / (1.0 + e_n));
    return env;
}

double compare_envelope(const EnergyTrace& trace, const DecayEnvelope& envelope,
                        double anchor_t) {
    const TraceRow& first = anchor_row(trace, anchor_t);   // validates the anchor
    double worst = 0.0;
    for (const TraceRow& row : trace.rows) {
        if (row.t < first.t) continue;
        worst = std::max(worst, row.E / envelope.value(row.t));
    }
    return worst;
}

} // namespace memschrod
