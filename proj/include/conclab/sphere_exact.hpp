#pragma once

#include "conclab/bounds.hpp"

namespace conclab {

// Exact spherical measures. Convention throughout: the codimension-k
// equatorial subsphere of S^n is the zero set of the first k coordinates,
// so d(x, subsphere) = arcsin |P_k x| with P_k the coordinate projection,
// and |P_k x|^2 follows a Beta(k/2, (n+1-k)/2) law.

// Query for the measure of the complement of the r-tube around the
// codimension-m equatorial subsphere of S^n.
struct TubeQuery {
    int n = 1;      // ambient sphere dimension
    int m = 1;      // codimension (coordinates projected out), 1 <= m <= n
    double r = 0.0; // geodesic tube radius in [0, pi/2]

    TubeQuery(int n_, int m_, double r_);
};

// Concentration function of S^n: hemispheres are extremal, so
// alpha(r) = (1/2)(1 - I_{sin^2 r}(1/2, n/2)) on [0, pi/2].
double alpha_sphere_exact(int n, double r);

// mu(S^n \ (S^{n-m})_r) = 1 - I_{sin^2 r}(m/2, (n+1-m)/2).
double tube_complement_exact(const TubeQuery& q);

// The four-exponential tube bound; equals the closed-manifold corollary
// evaluated at 2r/pi (asserted in the tests to 1e-12).
BoundValue cor41_bound(const TubeQuery& q);

// Same right-hand side without the r <= pi/2 restriction (the displayed
// inequality holds for every r > 0 even though the exact measure saturates).
BoundValue cor41_bound_at(int n, int m, double r);

// u(r, lambda) = (1-l) log((1-l)/sin^2 r) + l log(l/cos^2 r), nonnegative,
// zero exactly at sin^2 r = 1 - lambda.
double artstein_u(double r, double lambda);

// Large-n approximation of mu(S^n \ (S^{lambda n})_r); the displayed leading
// term when sin^2 r > 1 - lambda, one minus it otherwise. Asymptotic only:
// treated as a convergence trend, never a finite-n value.
double artstein_asymptotic(int n, double lambda, double r);

struct ArtsteinBracket {
    double lower = 0.0;
    double upper = 0.0;
    double u = 0.0;        // n/2 times artstein_u(r, m/n)
    bool complement_case = false; // true when sin^2 r > 1 - lambda
};

// Two-sided estimate of mu((S^m)_r) inside S^n for supplied constants
// c, c_prime in (0, 3]; the theorem guarantees such constants exist but not
// their values. Throws if a sqrt/log argument leaves the admissible range.
ArtsteinBracket artstein_bracket(int n, int m, double r, double c,
                                 double c_prime);

} // namespace conclab
