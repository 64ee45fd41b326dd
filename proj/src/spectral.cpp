#include "memschrod/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace memschrod {

ModalCoefficients project(const Profile& profile, int modes, double length,
                          int quad_points, Exec exec) {
    if (modes < 1) throw std::invalid_argument("project: need at least one mode");
    if (!(length > 0.0)) throw std::invalid_argument("project: length must be positive");
    if (quad_points < 4 * modes)
        throw std::invalid_argument("project: quadrature too coarse (need >= 4K points)");

    const int q = quad_points;
    const double h = length / q;
    // sample once; endpoints drop out of the trapezoid (sin vanishes there)
    std::vector<Complex> samples(q - 1);
    for (int j = 1; j < q; ++j) samples[j - 1] = profile(j * h);

    ModalCoefficients coeffs;
    coeffs.length = length;
    coeffs.values.assign(modes, Complex(0.0, 0.0));
    const bool parallel = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (int k = 1; k <= modes; ++k) {
        const double freq = 2.0 * std::numbers::pi * k / length;
        Complex acc(0.0, 0.0);
        for (int j = 1; j < q; ++j) acc += samples[j - 1] * std::sin(freq * (j * h));
        coeffs.values[k - 1] = (2.0 / length) * h * acc;
    }
    return coeffs;
}

Complex reconstruct_at(const ModalCoefficients& coeffs, double x) {
    if (x < 0.0 || x > coeffs.length)
        throw std::domain_error("reconstruct: position outside [0, L]");
    const double freq = 2.0 * std::numbers::pi / coeffs.length;
    Complex acc(0.0, 0.0);
    for (int k = 1; k <= coeffs.modes(); ++k)
        acc += coeffs.values[k - 1] * std::sin(freq * k * x);
    return acc;
}

std::vector<Complex> reconstruct(const ModalCoefficients& coeffs,
                                 std::span<const double> xs, Exec exec) {
    for (double x : xs)   // validate before entering the parallel region
        if (x < 0.0 || x > coeffs.length)
            throw std::domain_error("reconstruct: position outside [0, L]");
    std::vector<Complex> out(xs.size());
    const bool parallel = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(xs.size()); ++i)
        out[i] = reconstruct_at(coeffs, xs[i]);
    return out;
}

double parseval_l2(const ModalCoefficients& coeffs) {
    double acc = 0.0;
    for (const Complex& b : coeffs.values) acc += std::norm(b);
    return 0.5 * coeffs.length * acc;
}

// ---------------------------------------------------------------------------

struct InitialHistory::Impl {
    Kind kind = Kind::AnalyticConstant;
    Profile profile;                                     // constant-in-time kinds
    std::function<Complex(double, double)> evolving;     // time-varying kind
    std::vector<double> soliton;                         // A, lambda, x0, x1
    std::vector<double> xs;                              // tabulated
    std::vector<Complex> ys;
};

InitialHistory::InitialHistory() {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::AnalyticConstant;
    impl->profile = [](double) { return Complex(0.0, 0.0); };
    impl_ = std::move(impl);
}

InitialHistory InitialHistory::constant_profile(Profile profile) {
    InitialHistory h;
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::AnalyticConstant;
    impl->profile = std::move(profile);
    h.impl_ = std::move(impl);
    return h;
}

InitialHistory InitialHistory::time_varying(std::function<Complex(double, double)> profile) {
    InitialHistory h;
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::AnalyticTimeVarying;
    impl->evolving = std::move(profile);
    h.impl_ = std::move(impl);
    return h;
}

InitialHistory InitialHistory::soliton(double amplitude, double wavenumber,
                                       double width, double center) {
    if (!(width > 0.0)) throw std::invalid_argument("soliton: width must be positive");
    InitialHistory h;
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Soliton;
    impl->soliton = {amplitude, wavenumber, width, center};
    impl->profile = [amplitude, wavenumber, width, center](double x) {
        return amplitude * std::exp(Complex(0.0, wavenumber * x)) /
               std::cosh((x - center) / width);
    };
    h.impl_ = std::move(impl);
    return h;
}

InitialHistory InitialHistory::tabulated(std::vector<double> xs, std::vector<Complex> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("tabulated profile needs >= 2 matching samples");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("tabulated profile abscissae must be strictly increasing");
    InitialHistory h;
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Tabulated;
    impl->xs = std::move(xs);
    impl->ys = std::move(ys);
    auto* raw = impl.get();
    impl->profile = [raw](double x) -> Complex {
        const auto& xs = raw->xs;
        const auto& ys = raw->ys;
        if (x <= xs.front() || x >= xs.back()) {
            if (x == xs.front()) return ys.front();
            if (x == xs.back()) return ys.back();
            return Complex(0.0, 0.0);
        }
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin());
        const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return ys[i - 1] + t * (ys[i] - ys[i - 1]);
    };
    h.impl_ = std::move(impl);
    return h;
}

double InitialHistory::soliton_default_width(double amplitude, double wavenumber) {
    return 1.0 / (2.0 * amplitude * std::sqrt(wavenumber));
}

Complex InitialHistory::operator()(double x, double s) const {
    if (impl_->kind == Kind::AnalyticTimeVarying) return impl_->evolving(x, s);
    return impl_->profile(x);
}

bool InitialHistory::constant_in_time() const {
    return impl_->kind != Kind::AnalyticTimeVarying;
}

bool InitialHistory::operator==(const InitialHistory& other) const {
    if (impl_ == other.impl_) return true;
    if (impl_->kind != other.impl_->kind) return false;
    switch (impl_->kind) {
        case Kind::Soliton: return impl_->soliton == other.impl_->soliton;
        case Kind::Tabulated:
            return impl_->xs == other.impl_->xs && impl_->ys == other.impl_->ys;
        default: return false;   // analytic profiles compare by identity
    }
}

InitialHistory::Kind InitialHistory::kind() const { return impl_->kind; }

std::span<const double> InitialHistory::soliton_params() const {
    return impl_->soliton;
}

const std::string& InitialHistory::source_path() const { return source_path_; }
void InitialHistory::set_source_path(std::string path) { source_path_ = std::move(path); }

} // namespace memschrod
