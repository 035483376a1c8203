#include "conclab/sphere_exact.hpp"

#include <cmath>
#include <stdexcept>

#include "conclab/specfun.hpp"

namespace conclab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 0.5 * kPi;

double sin_sq(double r) {
    const double s = std::sin(r);
    return s * s;
}

double cos_sq(double r) {
    const double c = std::cos(r);
    return c * c;
}

} // namespace

TubeQuery::TubeQuery(int n_, int m_, double r_) : n(n_), m(m_), r(r_) {
    if (n < 1 || m < 1 || m > n)
        throw std::domain_error("TubeQuery: need 1 <= m <= n");
    if (std::isnan(r) || r < 0.0 || r > kHalfPi + 1e-12)
        throw std::domain_error("TubeQuery: radius must lie in [0, pi/2]");
}

double alpha_sphere_exact(int n, double r) {
    if (n < 1) throw std::domain_error("alpha_sphere_exact: n must be >= 1");
    if (std::isnan(r) || r < 0.0)
        throw std::domain_error("alpha_sphere_exact: radius must be nonnegative");
    if (r >= kHalfPi) return 0.0;
    return 0.5 * (1.0 - specfun::reg_inc_beta(0.5, n / 2.0, sin_sq(r)));
}

double tube_complement_exact(const TubeQuery& q) {
    if (q.r >= kHalfPi) return 0.0;
    return 1.0 -
           specfun::reg_inc_beta(q.m / 2.0, (q.n + 1.0 - q.m) / 2.0, sin_sq(q.r));
}

BoundValue cor41_bound(const TubeQuery& q) { return cor41_bound_at(q.n, q.m, q.r); }

BoundValue cor41_bound_at(int n, int m, double r) {
    if (n < 1 || m < 1 || m > n)
        throw std::domain_error("cor41_bound_at: need 1 <= m <= n");
    if (std::isnan(r) || r < 0.0)
        throw std::domain_error("cor41_bound_at: radius must be nonnegative");
    const ConstantFamily f = corollary_constants(m);
    const double exp_rate = std::sqrt(2.0 * n / m) / (3.0 * kPi);
    const double gauss_rate = (n - 1.0) / (4.0 * kPi * kPi * m);
    BoundValue best = BoundValue::from_log(f.log_a - exp_rate * r);
    best = min(best, BoundValue::from_log(f.log_a_tilde - 0.5 * exp_rate * r));
    best = min(best, BoundValue::from_log(f.log_b - gauss_rate * r * r));
    best = min(best, BoundValue::from_log(f.log_b_tilde - 0.5 * gauss_rate * r * r));
    return best;
}

double artstein_u(double r, double lambda) {
    if (!(r > 0.0) || !(r < kHalfPi))
        throw std::domain_error("artstein_u: r must lie strictly inside (0, pi/2)");
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw std::domain_error("artstein_u: lambda must lie strictly inside (0, 1)");
    const double s2 = sin_sq(r);
    const double c2 = cos_sq(r);
    return (1.0 - lambda) * std::log((1.0 - lambda) / s2) +
           lambda * std::log(lambda / c2);
}

double artstein_asymptotic(int n, double lambda, double r) {
    if (n < 1) throw std::domain_error("artstein_asymptotic: n must be >= 1");
    const double u = artstein_u(r, lambda);
    const double gap = sin_sq(r) - (1.0 - lambda);
    if (gap == 0.0)
        throw std::domain_error("artstein_asymptotic: sin^2 r = 1 - lambda is a pole");
    const double leading = std::sqrt(lambda * (1.0 - lambda) / (n * kPi)) / gap *
                           std::exp(-0.5 * n * u);
    return gap > 0.0 ? leading : 1.0 - leading;
}

ArtsteinBracket artstein_bracket(int n, int m, double r, double c,
                                 double c_prime) {
    if (n < 6 || m < 3 || m > n - 3)
        throw std::domain_error("artstein_bracket: need n >= 6 and 3 <= m <= n-3");
    if (!(c > 0.0) || c > 3.0 || !(c_prime > 0.0) || c_prime > 3.0)
        throw std::domain_error("artstein_bracket: constants must lie in (0, 3]");
    const double lambda = static_cast<double>(m) / n;
    const double s2 = sin_sq(r);
    if (s2 == 1.0 - lambda)
        throw std::domain_error("artstein_bracket: sin^2 r = 1 - lambda separates the cases");

    ArtsteinBracket out;
    out.u = 0.5 * n * artstein_u(r, lambda);
    out.complement_case = s2 > 1.0 - lambda;

    const double log_l = std::log(s2 / (1.0 - lambda));
    const double log_lp = std::log(cos_sq(r) / lambda);
    const double t = out.u + c + log_l;
    const double s = out.u + c_prime + log_lp;
    if (!(t > 0.0))
        throw std::domain_error(
            "artstein_bracket: u + c + log(l) must be positive (sqrt argument)");
    if (!(s > 0.0))
        throw std::domain_error(
            "artstein_bracket: u + c' + log(l') must be positive (sqrt argument)");

    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * kPi);
    const double upper_expr = inv_sqrt_2pi * std::exp(-t) / std::sqrt(t);
    const double lower_expr =
        inv_sqrt_2pi * std::exp(-s) / (1.0 / std::sqrt(s) + std::sqrt(s));

    if (out.complement_case) {
        out.lower = 1.0 - lower_expr;
        out.upper = 1.0 - upper_expr;
    } else {
        out.lower = lower_expr;
        out.upper = upper_expr;
    }
    return out;
}

} // namespace conclab
