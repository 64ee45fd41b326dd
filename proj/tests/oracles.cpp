#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace oracles {

std::vector<Complex> rk4_augmented(const AugmentedOde& ode, Complex b0, double T,
                                   double h, long snap_every) {
    Complex b = b0;
    Complex z = ode.d / (ode.q * ode.q) * b0;
    const auto rhs = [&](Complex bb, Complex zz) {
        return std::pair<Complex, Complex>(
            Complex(0.0, -1.0) * (ode.dispersion * ode.mu) * bb - ode.weight * zz,
            -ode.q * zz + (ode.d / ode.q) * bb);
    };
    const long n = std::lround(T / h);
    std::vector<Complex> snaps;
    snaps.push_back(b);
    for (long i = 1; i <= n; ++i) {
        const auto k1 = rhs(b, z);
        const auto k2 = rhs(b + 0.5 * h * k1.first, z + 0.5 * h * k1.second);
        const auto k3 = rhs(b + 0.5 * h * k2.first, z + 0.5 * h * k2.second);
        const auto k4 = rhs(b + h * k3.first, z + h * k3.second);
        b += h / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
        z += h / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
        if (i % snap_every == 0) snaps.push_back(b);
    }
    return snaps;
}

Complex rk4_augmented_final(const AugmentedOde& ode, Complex b0, double T, double h) {
    return rk4_augmented(ode, b0, T, h, std::lround(T / h)).back();
}

double direct_energy(const std::vector<std::vector<Complex>>& records, double dt,
                     double length, const std::vector<double>& mode_weights,
                     const std::vector<double>& g_weights) {
    const int K = static_cast<int>(records.size());
    const int M = static_cast<int>(g_weights.size()) - 1;
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
        const auto& rec = records[k];
        const int n = static_cast<int>(rec.size()) - 1;   // index of current step
        total += std::norm(rec[n]);
        for (int m = 1; m <= M; ++m) {
            Complex eta(0.0, 0.0);
            for (int l = n - m; l <= n; ++l) eta += dt * rec[l];
            total += dt * mode_weights[k] * g_weights[m] * std::norm(eta);
        }
    }
    return 0.25 * length * total;
}

std::vector<Complex> project_trapezoid(const std::function<Complex(double)>& profile,
                                       int modes, double length, long quad_points) {
    std::vector<Complex> out(modes);
    const double h = length / static_cast<double>(quad_points);
    for (int k = 1; k <= modes; ++k) {
        const double freq = 2.0 * std::numbers::pi * k / length;
        Complex acc(0.0, 0.0);
        for (long j = quad_points - 1; j >= 1; --j)
            acc += profile(j * h) * std::sin(freq * j * h);
        out[k - 1] = 2.0 / length * h * acc;
    }
    return out;
}

Complex direct_past_sum(const std::vector<Complex>& mids, const std::vector<double>& f,
                        double dt, int window) {
    // newest entry is mids.back() = mid[n-1]; term m uses mid[n-m]
    Complex acc(0.0, 0.0);
    const int n = static_cast<int>(mids.size());
    for (int m = 1; m <= window; ++m) acc += f[m] * mids[n - m];
    return dt * acc;
}

} // namespace oracles
