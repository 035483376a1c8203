#pragma once

#include <cmath>

namespace conclab::specfun {

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// log B(a, b) = log Gamma(a) + log Gamma(b) - log Gamma(a + b).
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
/// Continued-fraction evaluation; the half of the domain where the fraction
/// converges slowly is routed through I_x(a,b) = 1 - I_{1-x}(b,a).
double reg_inc_beta(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double reg_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double reg_gamma_q(double a, double x);

/// log Q(a, x), finite even where Q underflows to zero.
double log_reg_gamma_q(double a, double x);

/// log(1 + e^t) without overflow.
inline double log1pexp(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

} // namespace conclab::specfun
