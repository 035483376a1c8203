#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace conclab {

// The triple of an assumed concentration profile alpha(r) <= A e^{-k r^p}:
// amplitude A, rate k, exponent p (all positive).
struct ConcentrationProfile {
    double amplitude = 1.0; // multiplicative constant
    double rate = 1.0;      // coefficient of r^p in the exponent
    double exponent = 1.0;  // p; the main tail bound needs p in {1, 2}

    ConcentrationProfile() = default;
    ConcentrationProfile(double a, double k, double p);

    double evaluate(double r) const {
        return std::min(1.0, amplitude * std::exp(-rate * std::pow(r, exponent)));
    }
};

// Built-in profiles for the unit sphere S^n: alpha <= e^{-sqrt(n) r / 3}
// (spectral gap n) and alpha <= e^{-(n-1) r^2 / 2} (Ricci bound n-1).
ConcentrationProfile sphere_exponential_profile(int n);
ConcentrationProfile sphere_gaussian_profile(int n);

// Probability bound kept in the natural-log domain so composite exponents
// like e^{pi^2 C^2} never overflow; value() clamps to [0, 1].
struct BoundValue {
    double log_value = 0.0;

    double value() const { return log_value >= 0.0 ? 1.0 : std::exp(log_value); }
    static BoundValue from_log(double lv) { return BoundValue{lv}; }
};

inline BoundValue min(BoundValue a, BoundValue b) {
    return a.log_value < b.log_value ? a : b;
}

// Thrown when a tail evaluator is asked for an exponent outside {1, 2}.
struct unsupported_exponent_error : std::domain_error {
    using std::domain_error::domain_error;
};

// K_p = integral_0^inf e^{-r^p} dr = Gamma(1/p)/p.
double k_p(double p);
double log_k_p(double p);

// M_alpha = integral |s|^alpha dgamma_1(s) = 2^{alpha/2} pi^{-1/2}
// Gamma((alpha+1)/2), alpha > -1.
double m_alpha(double alpha);

// E|Z|^q for Z standard Gaussian on R^m (chi-distribution moment).
double gauss_abs_moment(int m, double q);
double log_gauss_abs_moment(int m, double q);

// log of max{e^{2(A K_p)^p}, 2 A e^{(2 A K_p)^p}} for profile amplitude A.
double deviation_prefactor_log(const ConcentrationProfile& profile);

// mu(|f| >= r) <= prefactor * e^{-2^{1-p} k r^p} for a 1-Lipschitz f with
// zero expectation.
BoundValue lemma23_bound(const ConcentrationProfile& profile, double r);

// Moment bound V_q(f)^q via the one-point deviation inequality.
double vq_bound_first(const ConcentrationProfile& profile, int m, double q);
double vq_bound_first_log(const ConcentrationProfile& profile, int m, double q);

// Moment bound V_q(f)^q via the two-point inequality V_q <= Vtilde_q.
double vq_bound_second(const ConcentrationProfile& profile, int m, double q);
double vq_bound_second_log(const ConcentrationProfile& profile, int m, double q);

// Two-point deviation: (mu x mu)(|phi(x)-phi(y)| >= r) <= 2 alpha(r/2).
double two_point_tail_bound(const std::function<double(double)>& alpha, double r);

// The four constants attached to a profile and target dimension m. log_b is
// the displayed form with exponent (pi*A)^2; log_b_chained carries the
// exponent pi*A^2 that chaining the deviation inequality with K_2 =
// sqrt(pi)/2 produces. The displayed form is the default everywhere.
struct ConstantFamily {
    double log_a = 0.0;
    double log_a_tilde = 0.0;
    double log_b = 0.0;
    double log_b_tilde = 0.0;
    double log_b_chained = 0.0;

    double a() const { return std::exp(log_a); }
    double a_tilde() const { return std::exp(log_a_tilde); }
    double b() const { return std::exp(log_b); }
    double b_tilde() const { return std::exp(log_b_tilde); }
};

ConstantFamily constants(int m, const ConcentrationProfile& profile);

// The amplitude-1 specializations used for closed manifolds, evaluated from
// their own displayed formulas (independent code path, checked for
// consistency against constants() in the tests).
ConstantFamily corollary_constants(int m);

// Main tail bound: mu(d(f, E) >= r) for 1-Lipschitz f into an m-dimensional
// Hadamard target, under an exponential (p=1) or Gaussian (p=2) profile.
BoundValue thm_main_tail(const ConcentrationProfile& profile, int m, double r);

enum class ManifoldBoundKind {
    SpectralGap,     // parameter = first nonzero Laplace eigenvalue
    RicciLowerBound, // parameter = positive Ricci curvature lower bound
};

// Closed-manifold corollary: the amplitude-1 constants with rates derived
// from the spectral gap or the Ricci bound.
BoundValue cor_manifold_tail(ManifoldBoundKind kind, double parameter, int m,
                             double r);

// mu(d(f, E) >= r) <= m / (lambda1 r^2), clamped.
BoundValue gromov_bound(double lambda1, int m, double r);

// C * A * gamma_m(|x| >= C sqrt(k) r) for a Gaussian (p=2) profile. The
// universal constant C is the caller's to supply; the comparison carries no
// default.
BoundValue ledoux_oleszkiewicz_form(const ConcentrationProfile& profile, int m,
                                    double r, double universal_constant);

// Exact gamma_m(|x| >= r): chi survival, Q(m/2, r^2/2).
double gaussian_tail_exact(int m, double r);
double log_gaussian_tail_exact(int m, double r);

} // namespace conclab
