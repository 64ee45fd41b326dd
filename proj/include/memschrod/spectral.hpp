#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "memschrod/exec.hpp"

namespace memschrod {

using Complex = std::complex<double>;
using Profile = std::function<Complex(double)>;

/// Sine-series amplitudes over the basis sin(2 k pi x / L), k = 1..K.
struct ModalCoefficients {
    std::vector<Complex> values;   // B_k, k = 1..K
    double length = 1.0;           // L

    int modes() const { return static_cast<int>(values.size()); }
};

/// B_k = (2/L) \int_0^L profile(x) sin(2 k pi x / L) dx by composite
/// trapezoid on quad_points uniform subintervals (endpoints contribute
/// zero). Requires quad_points >= 4 * modes as an aliasing guard.
ModalCoefficients project(const Profile& profile, int modes, double length,
                          int quad_points, Exec exec = Exec::Parallel);

/// Evaluate sum_k B_k sin(2 k pi x / L); x must lie in [0, L].
Complex reconstruct_at(const ModalCoefficients& coeffs, double x);
std::vector<Complex> reconstruct(const ModalCoefficients& coeffs,
                                 std::span<const double> xs,
                                 Exec exec = Exec::Parallel);

/// \int_0^L |y|^2 dx = (L/2) sum_k |B_k|^2 for band-limited y.
double parseval_l2(const ModalCoefficients& coeffs);

/// Prescribed history y0(x, s); s >= 0 is measured into the past, so the
/// run starts from y0(., 0) and y(., -s) = y0(., s).
class InitialHistory {
public:
    InitialHistory();

    static InitialHistory constant_profile(Profile profile);
    static InitialHistory time_varying(std::function<Complex(double, double)> profile);
    /// y0(x) = A exp(i lambda x) / cosh((x - x1) / x0), constant in time.
    static InitialHistory soliton(double amplitude, double wavenumber,
                                  double width, double center);
    /// Piecewise-linear interpolation of (x, y) samples, zero outside their
    /// range, constant in time. xs must be strictly increasing.
    static InitialHistory tabulated(std::vector<double> xs, std::vector<Complex> ys);

    static double soliton_default_width(double amplitude, double wavenumber);

    Complex operator()(double x, double s) const;
    bool constant_in_time() const;

    /// Compares the construction recipe (family and parameters); analytic
    /// profiles compare by identity.
    bool operator==(const InitialHistory& other) const;

    enum class Kind { Soliton, Tabulated, AnalyticConstant, AnalyticTimeVarying };
    Kind kind() const;
    /// Soliton parameters in order A, lambda, x0, x1 (empty otherwise).
    std::span<const double> soliton_params() const;
    const std::string& source_path() const;     // tabulated: origin file, may be empty
    void set_source_path(std::string path);

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    std::string source_path_;
};

} // namespace memschrod
