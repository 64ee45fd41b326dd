#pragma once

#include <optional>
#include <string>

namespace memschrod {

enum class KernelFamily { None, Exponential, Polynomial };

/// Memory-kernel family. The relaxation density is g(s) >= 0 and the weight
/// entering the convolution is its tail mass f(s) = \int_s^inf g, so that
/// f' = -g, f(0) = g0 > 0 and f -> 0 at infinity.
///
///   Exponential: g(s) = d1 exp(-q1 s),      f(s) = d1/q1 exp(-q1 s)
///   Polynomial:  g(s) = d2 (1+s)^{-q2},     f(s) = d2/(q2-1) (1+s)^{-(q2-1)}
///   None:        g = f = 0 (conservative dynamics)
class KernelSpec {
public:
    KernelSpec() = default;

    static KernelSpec none();
    /// requires d1 > 0, q1 > 0
    static KernelSpec exponential(double d1, double q1);
    /// requires d2 > 0, q2 > 1 (finite mass); q2 > 3 is needed for the decay
    /// theory and is reported by check_hypotheses, not enforced here
    static KernelSpec polynomial(double d2, double q2);

    KernelFamily family() const { return family_; }
    double amplitude() const { return amplitude_; }   // d1 or d2
    double exponent() const { return exponent_; }     // q1 or q2

    double g(double s) const;
    double g_prime(double s) const;
    double f(double s) const;
    double mass() const;   // g0 = \int_0^inf g = f(0)

    bool operator==(const KernelSpec&) const = default;

private:
    KernelSpec(KernelFamily fam, double amp, double exp)
        : family_(fam), amplitude_(amp), exponent_(exp) {}

    KernelFamily family_ = KernelFamily::None;
    double amplitude_ = 0.0;
    double exponent_ = 0.0;
};

enum class DecayBranch { NotSatisfied, Exponential, Convex };

struct HypothesisReport {
    KernelFamily family = KernelFamily::None;
    bool h1_ok = false;
    bool h2_ok = false;
    std::optional<double> beta0;              // -beta0 g <= g'
    DecayBranch branch = DecayBranch::NotSatisfied;
    double alpha0 = 0.0;                      // exponential branch: g' <= -alpha0 g
    double p = 0.0;                           // convex branch: G(s) = s^p
    double g0_mass = 0.0;
    bool grid_audit_ok = false;
    std::string violation;                    // set when a hypothesis fails

    /// true when every hypothesis required for the decay theory holds
    /// (vacuously true for the zero kernel).
    bool all_ok() const;
};

/// Analytic per-family verification of the standing hypotheses, plus a
/// numerical audit of the inequalities on 1000 log-spaced points in
/// [1e-3, 1e3]. Never throws on a bad kernel; reports instead.
HypothesisReport check_hypotheses(const KernelSpec& kernel);

/// Iterated decay maps. G0(s) = s on the exponential branch, G0(s) = s G'(s)
/// = p s^p on the convex branch; G1 = G0^{-1}; G_m(s) = G1(s G_{m-1}(s)).
/// Both branches stay monomials, so G1 is evaluated in closed form.
double envelope_gn(DecayBranch branch, double p, int order, double s);

/// G_n(s) = c_n s^{e_n}: the exponent e_n (= n, or sum_{m<=n} p^{-m}).
double envelope_exponent(DecayBranch branch, double p, int order);
/// G_n(s) = c_n s^{e_n}: the coefficient c_n.
double envelope_coefficient(DecayBranch branch, double p, int order);

/// Theoretical envelope t -> scale * G_n(scale / t). The scale is calibrated
/// against a measured trace (see analysis::calibrate_envelope); the theory
/// only guarantees existence of the constant.
struct DecayEnvelope {
    int order = 1;
    DecayBranch branch = DecayBranch::Exponential;
    double p = 0.0;
    double scale = 1.0;

    double value(double t) const;   // throws std::domain_error for t <= 0
};

const char* to_string(KernelFamily family);
const char* to_string(DecayBranch branch);

} // namespace memschrod
