#include "memschrod/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace memschrod {

namespace {

void require_nonneg_time(double s) {
    if (s < 0.0) throw std::domain_error("kernel evaluated at negative time");
}

// Margin over the minimal admissible convex exponent (q2+1)/(q2-3); the
// theory only requires a strict inequality, a fixed margin keeps envelopes
// reproducible.
constexpr double kConvexExponentMargin = 1.01;

} // namespace

KernelSpec KernelSpec::none() { return KernelSpec(KernelFamily::None, 0.0, 0.0); }

KernelSpec KernelSpec::exponential(double d1, double q1) {
    if (!(d1 > 0.0) || !(q1 > 0.0))
        throw std::invalid_argument("exponential kernel requires d1 > 0 and q1 > 0");
    return KernelSpec(KernelFamily::Exponential, d1, q1);
}

KernelSpec KernelSpec::polynomial(double d2, double q2) {
    if (!(d2 > 0.0) || !(q2 > 1.0))
        throw std::invalid_argument("polynomial kernel requires d2 > 0 and q2 > 1");
    return KernelSpec(KernelFamily::Polynomial, d2, q2);
}

double KernelSpec::g(double s) const {
    require_nonneg_time(s);
    switch (family_) {
        case KernelFamily::Exponential: return amplitude_ * std::exp(-exponent_ * s);
        case KernelFamily::Polynomial: return amplitude_ * std::pow(1.0 + s, -exponent_);
        case KernelFamily::None: return 0.0;
    }
    return 0.0;
}

double KernelSpec::g_prime(double s) const {
    require_nonneg_time(s);
    switch (family_) {
        case KernelFamily::Exponential: return -exponent_ * g(s);
        case KernelFamily::Polynomial: return -exponent_ / (1.0 + s) * g(s);
        case KernelFamily::None: return 0.0;
    }
    return 0.0;
}

double KernelSpec::f(double s) const {
    require_nonneg_time(s);
    switch (family_) {
        case KernelFamily::Exponential:
            return amplitude_ / exponent_ * std::exp(-exponent_ * s);
        case KernelFamily::Polynomial:
            return amplitude_ / (exponent_ - 1.0) * std::pow(1.0 + s, -(exponent_ - 1.0));
        case KernelFamily::None: return 0.0;
    }
    return 0.0;
}

double KernelSpec::mass() const { return f(0.0); }

bool HypothesisReport::all_ok() const {
    if (family == KernelFamily::None) return true;
    return h1_ok && h2_ok && branch != DecayBranch::NotSatisfied && grid_audit_ok;
}

namespace {

// Inequality audit on a log-spaced grid; catches parameter-entry mistakes
// that the per-family algebra would mask.
bool grid_audit(const KernelSpec& kernel, const HypothesisReport& report) {
    constexpr int n_points = 1000;
    const double lo = 1e-3, hi = 1e3;
    const double step = std::log(hi / lo) / (n_points - 1);
    const double slack = 1e-12;
    for (int i = 0; i < n_points; ++i) {
        const double s = lo * std::exp(i * step);
        const double gv = kernel.g(s);
        const double gp = kernel.g_prime(s);
        const double fv = kernel.f(s);
        if (!(gv >= 0.0) || !(fv >= 0.0)) return false;
        if (gp > slack * gv) return false;                       // g non-increasing
        if (report.beta0 && gp < -(*report.beta0) * gv * (1.0 + slack)) return false;
        if (report.branch == DecayBranch::Exponential &&
            gp > -report.alpha0 * gv * (1.0 - slack))
            return false;
    }
    return true;
}

} // namespace

HypothesisReport check_hypotheses(const KernelSpec& kernel) {
    HypothesisReport report;
    report.family = kernel.family();
    report.g0_mass = kernel.mass();
    switch (kernel.family()) {
        case KernelFamily::None:
            report.h1_ok = true;
            report.h2_ok = true;
            report.grid_audit_ok = true;
            return report;
        case KernelFamily::Exponential:
            report.h1_ok = true;
            report.h2_ok = true;
            report.beta0 = kernel.exponent();
            report.branch = DecayBranch::Exponential;
            report.alpha0 = kernel.exponent();
            break;
        case KernelFamily::Polynomial: {
            const double q2 = kernel.exponent();
            report.h1_ok = true;
            report.h2_ok = true;
            report.beta0 = q2;
            if (q2 > 3.0) {
                report.branch = DecayBranch::Convex;
                report.p = (q2 + 1.0) / (q2 - 3.0) * kConvexExponentMargin;
            } else {
                report.branch = DecayBranch::NotSatisfied;
                report.violation = "H3 requires q2>3";
            }
            break;
        }
    }
    report.grid_audit_ok = grid_audit(kernel, report);
    if (!report.grid_audit_ok && report.violation.empty())
        report.violation = "grid audit failed";
    return report;
}

namespace {

double g1_closed_form(DecayBranch branch, double p, double u) {
    // G1 = G0^{-1}; exponential branch G0(s) = s, convex branch G0(s) = p s^p.
    if (branch == DecayBranch::Exponential) return u;
    return std::pow(u / p, 1.0 / p);
}

void require_branch(DecayBranch branch, double p, int order) {
    if (branch == DecayBranch::NotSatisfied)
        throw std::invalid_argument("no decay branch available");
    if (branch == DecayBranch::Convex && !(p > 1.0))
        throw std::invalid_argument("convex branch requires p > 1");
    if (order < 1) throw std::invalid_argument("envelope order must be >= 1");
}

} // namespace

double envelope_gn(DecayBranch branch, double p, int order, double s) {
    require_branch(branch, p, order);
    if (s < 0.0) throw std::domain_error("envelope map evaluated at negative argument");
    double value = g1_closed_form(branch, p, s);
    for (int m = 2; m <= order; ++m) value = g1_closed_form(branch, p, s * value);
    return value;
}

double envelope_exponent(DecayBranch branch, double p, int order) {
    require_branch(branch, p, order);
    if (branch == DecayBranch::Exponential) return static_cast<double>(order);
    double e = 0.0;
    for (int m = 1; m <= order; ++m) e = (1.0 + e) / p;
    return e;
}

double envelope_coefficient(DecayBranch branch, double p, int order) {
    require_branch(branch, p, order);
    if (branch == DecayBranch::Exponential) return 1.0;
    double c = 1.0;
    for (int m = 1; m <= order; ++m) c = std::pow(c / p, 1.0 / p);
    return c;
}

double DecayEnvelope::value(double t) const {
    if (!(t > 0.0)) throw std::domain_error("envelope evaluated at t <= 0");
    return scale * envelope_gn(branch, p, order, scale / t);
}

const char* to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::None: return "none";
        case KernelFamily::Exponential: return "exponential";
        case KernelFamily::Polynomial: return "polynomial";
    }
    return "?";
}

const char* to_string(DecayBranch branch) {
    switch (branch) {
        case DecayBranch::NotSatisfied: return "not-satisfied";
        case DecayBranch::Exponential: return "exponential";
        case DecayBranch::Convex: return "convex";
    }
    return "?";
}

} // namespace memschrod
