#include "conclab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conclab/specfun.hpp"

namespace conclab {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kHalfLogPi = 0.5 * std::log(kPi);
const double kLog2 = std::log(2.0);

void check_dim(int m) {
    if (m < 1) throw std::domain_error("bounds: dimension m must be >= 1");
}

void check_radius(double r) {
    if (std::isnan(r) || r < 0.0)
        throw std::domain_error("bounds: radius must be nonnegative");
}

// log of q * Gamma(q/p) / (p * Gamma((q+1)/2)).
double log_gamma_ratio(double p, double q) {
    return std::log(q) + specfun::log_gamma(q / p) - std::log(p) -
           specfun::log_gamma((q + 1.0) / 2.0);
}

} // namespace

ConcentrationProfile::ConcentrationProfile(double a, double k, double p)
    : amplitude(a), rate(k), exponent(p) {
    if (!(amplitude > 0.0) || !(rate > 0.0) || !(exponent > 0.0))
        throw std::domain_error("ConcentrationProfile: all parameters must be positive");
}

ConcentrationProfile sphere_exponential_profile(int n) {
    check_dim(n);
    return ConcentrationProfile(1.0, std::sqrt(static_cast<double>(n)) / 3.0, 1.0);
}

ConcentrationProfile sphere_gaussian_profile(int n) {
    if (n < 2) throw std::domain_error("sphere_gaussian_profile: need n >= 2");
    return ConcentrationProfile(1.0, (n - 1.0) / 2.0, 2.0);
}

double k_p(double p) {
    if (!(p > 0.0)) throw std::domain_error("k_p: p must be positive");
    return std::exp(log_k_p(p));
}

double log_k_p(double p) {
    if (!(p > 0.0)) throw std::domain_error("k_p: p must be positive");
    // Gamma(1/p)/p = Gamma(1 + 1/p)
    return specfun::log_gamma(1.0 + 1.0 / p);
}

double m_alpha(double alpha) {
    if (!(alpha > -1.0)) throw std::domain_error("m_alpha: need alpha > -1");
    return std::exp(0.5 * alpha * kLog2 - kHalfLogPi +
                    specfun::log_gamma((alpha + 1.0) / 2.0));
}

double gauss_abs_moment(int m, double q) {
    return std::exp(log_gauss_abs_moment(m, q));
}

double log_gauss_abs_moment(int m, double q) {
    check_dim(m);
    if (std::isnan(q) || q < 0.0)
        throw std::domain_error("gauss_abs_moment: q must be nonnegative");
    if (q == 0.0) return 0.0;
    return 0.5 * q * kLog2 + specfun::log_gamma((m + q) / 2.0) -
           specfun::log_gamma(m / 2.0);
}

double deviation_prefactor_log(const ConcentrationProfile& profile) {
    const double a = profile.amplitude;
    const double p = profile.exponent;
    // (A K_p)^p and (2 A K_p)^p as exponents; may be large, never stored as
    // e^{...} directly.
    const double ak_p = std::exp(p * (std::log(a) + log_k_p(p)));
    const double two_ak_p = std::exp(p * (std::log(2.0 * a) + log_k_p(p)));
    return std::max(2.0 * ak_p, std::log(2.0 * a) + two_ak_p);
}

BoundValue lemma23_bound(const ConcentrationProfile& profile, double r) {
    check_radius(r);
    const double p = profile.exponent;
    const double decay = std::exp((1.0 - p) * kLog2) * profile.rate * std::pow(r, p);
    return BoundValue::from_log(deviation_prefactor_log(profile) - decay);
}

double vq_bound_first(const ConcentrationProfile& profile, int m, double q) {
    return std::exp(vq_bound_first_log(profile, m, q));
}

double vq_bound_first_log(const ConcentrationProfile& profile, int m, double q) {
    check_dim(m);
    if (!(q >= 1.0)) throw std::domain_error("vq_bound: q must be >= 1");
    const double p = profile.exponent;
    return (-q / p + q / 2.0) * kLog2 + kHalfLogPi + deviation_prefactor_log(profile) -
           (q / p) * std::log(profile.rate) + log_gamma_ratio(p, q) +
           log_gauss_abs_moment(m, q);
}

double vq_bound_second(const ConcentrationProfile& profile, int m, double q) {
    return std::exp(vq_bound_second_log(profile, m, q));
}

double vq_bound_second_log(const ConcentrationProfile& profile, int m, double q) {
    check_dim(m);
    if (!(q >= 1.0)) throw std::domain_error("vq_bound: q must be >= 1");
    const double p = profile.exponent;
    return kHalfLogPi + (q / 2.0 + 1.0) * kLog2 + std::log(profile.amplitude) -
           (q / p) * std::log(profile.rate) + log_gamma_ratio(p, q) +
           log_gauss_abs_moment(m, q);
}

double two_point_tail_bound(const std::function<double(double)>& alpha, double r) {
    check_radius(r);
    return std::min(1.0, 2.0 * alpha(r / 2.0));
}

ConstantFamily constants(int m, const ConcentrationProfile& profile) {
    check_dim(m);
    const double a = profile.amplitude;
    const double e1 = (m + 1.0) / (4.0 * m - 2.0);
    const double e2 = 1.0 / (4.0 * m - 2.0);
    const double log_tail_factor = std::log(2.0 + std::exp(e2));

    ConstantFamily f;
    f.log_a = specfun::log1pexp(kHalfLogPi - 2.0 * kLog2 +
                                std::max(0.0, std::log(2.0 * a)) + 2.0 * a + e1 +
                                log_tail_factor);
    f.log_a_tilde =
        specfun::log1pexp(kHalfLogPi + std::log(a) - kLog2 + e1 + log_tail_factor);
    const double pia_sq = (kPi * a) * (kPi * a);
    f.log_b = specfun::log1pexp(
        kHalfLogPi + e1 - kLog2 +
        std::max(0.5 * pia_sq, std::log(2.0 * a) + pia_sq));
    f.log_b_tilde = specfun::log1pexp(kHalfLogPi + std::log(a) + e1);
    const double pia2 = kPi * a * a;
    f.log_b_chained = specfun::log1pexp(
        kHalfLogPi + e1 - kLog2 + std::max(0.5 * pia2, std::log(2.0 * a) + pia2));
    return f;
}

ConstantFamily corollary_constants(int m) {
    check_dim(m);
    const double e1 = (m + 1.0) / (4.0 * m - 2.0);
    const double e2 = 1.0 / (4.0 * m - 2.0);
    const double log_tail_factor = std::log(2.0 + std::exp(e2));

    ConstantFamily f;
    f.log_a = specfun::log1pexp(kHalfLogPi - kLog2 +
                                (9.0 * m - 3.0) / (4.0 * m - 2.0) + log_tail_factor);
    f.log_a_tilde = specfun::log1pexp(kHalfLogPi - kLog2 + e1 + log_tail_factor);
    f.log_b = specfun::log1pexp(kHalfLogPi + kPi * kPi + e1);
    f.log_b_tilde = specfun::log1pexp(kHalfLogPi + e1);
    f.log_b_chained = specfun::log1pexp(
        kHalfLogPi + e1 - kLog2 + std::max(0.5 * kPi, kLog2 + kPi));
    return f;
}

BoundValue thm_main_tail(const ConcentrationProfile& profile, int m, double r) {
    check_dim(m);
    check_radius(r);
    const ConstantFamily f = constants(m, profile);
    const double k = profile.rate;
    if (profile.exponent == 1.0) {
        const double s = k / std::sqrt(2.0 * m);
        return min(BoundValue::from_log(f.log_a - s * r),
                   BoundValue::from_log(f.log_a_tilde - 0.5 * s * r));
    }
    if (profile.exponent == 2.0) {
        const double s = k / (8.0 * m);
        return min(BoundValue::from_log(f.log_b - s * r * r),
                   BoundValue::from_log(f.log_b_tilde - 0.5 * s * r * r));
    }
    throw unsupported_exponent_error(
        "thm_main_tail: only exponents 1 (exponential) and 2 (Gaussian) are covered");
}

BoundValue cor_manifold_tail(ManifoldBoundKind kind, double parameter, int m,
                             double r) {
    check_dim(m);
    check_radius(r);
    if (!(parameter > 0.0))
        throw std::domain_error("cor_manifold_tail: parameter must be positive");
    const ConstantFamily f = corollary_constants(m);
    if (kind == ManifoldBoundKind::SpectralGap) {
        const double s = std::sqrt(parameter / (2.0 * m)) / 3.0;
        return min(BoundValue::from_log(f.log_a - s * r),
                   BoundValue::from_log(f.log_a_tilde - 0.5 * s * r));
    }
    const double s = parameter / (16.0 * m);
    return min(BoundValue::from_log(f.log_b - s * r * r),
               BoundValue::from_log(f.log_b_tilde - 0.5 * s * r * r));
}

BoundValue gromov_bound(double lambda1, int m, double r) {
    check_dim(m);
    check_radius(r);
    if (!(lambda1 > 0.0))
        throw std::domain_error("gromov_bound: lambda1 must be positive");
    if (r == 0.0) return BoundValue::from_log(std::numeric_limits<double>::infinity());
    return BoundValue::from_log(std::log(static_cast<double>(m)) -
                                std::log(lambda1) - 2.0 * std::log(r));
}

BoundValue ledoux_oleszkiewicz_form(const ConcentrationProfile& profile, int m,
                                    double r, double universal_constant) {
    check_dim(m);
    check_radius(r);
    if (profile.exponent != 2.0)
        throw std::domain_error("ledoux_oleszkiewicz_form: profile must be Gaussian (p=2)");
    if (!(universal_constant > 0.0))
        throw std::domain_error("ledoux_oleszkiewicz_form: constant must be positive");
    const double t = universal_constant * std::sqrt(profile.rate) * r;
    return BoundValue::from_log(std::log(universal_constant) +
                                std::log(profile.amplitude) +
                                log_gaussian_tail_exact(m, t));
}

double gaussian_tail_exact(int m, double r) {
    check_dim(m);
    check_radius(r);
    return specfun::reg_gamma_q(m / 2.0, r * r / 2.0);
}

double log_gaussian_tail_exact(int m, double r) {
    check_dim(m);
    check_radius(r);
    return specfun::log_reg_gamma_q(m / 2.0, r * r / 2.0);
}

} // namespace conclab
