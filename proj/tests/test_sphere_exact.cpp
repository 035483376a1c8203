#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "conclab/geometry.hpp"
#include "conclab/sphere_exact.hpp"

using namespace conclab;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 0.5 * kPi;
}

TEST_CASE("alpha_sphere_exact closed form on the circle") {
    for (double r = 0.05; r < kHalfPi; r += 0.05) {
        CHECK(alpha_sphere_exact(1, r) ==
              doctest::Approx(0.5 - r / kPi).epsilon(1e-12));
    }
    CHECK(alpha_sphere_exact(1, kPi / 4.0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("alpha_sphere_exact endpoints") {
    for (int n : {1, 2, 10, 100}) {
        CHECK(alpha_sphere_exact(n, 0.0) == doctest::Approx(0.5));
        CHECK(alpha_sphere_exact(n, kHalfPi) == 0.0);
    }
}

TEST_CASE("alpha_sphere_exact sits below the spectral-gap profile") {
    const int n = 100;
    for (int k = 1; k < 200; ++k) {
        const double r = kHalfPi * k / 200.0;
        CHECK(alpha_sphere_exact(n, r) <=
              std::exp(-std::sqrt(static_cast<double>(n)) * r / 3.0) + 1e-15);
    }
}

TEST_CASE("alpha and tube complement are non-increasing in r") {
    double prev_alpha = 0.6;
    double prev_tube = 1.1;
    for (int k = 0; k <= 1000; ++k) {
        const double r = kHalfPi * k / 1000.0;
        const double a = alpha_sphere_exact(12, r);
        const double t = tube_complement_exact(TubeQuery(12, 4, r));
        CHECK(a <= prev_alpha + 1e-12);
        CHECK(t <= prev_tube + 1e-12);
        prev_alpha = a;
        prev_tube = t;
    }
}

TEST_CASE("tube_complement_exact closed form on S^2") {
    for (double r = 0.0; r < kHalfPi; r += 0.05) {
        CHECK(tube_complement_exact(TubeQuery(2, 1, r)) ==
              doctest::Approx(1.0 - std::sin(r)).epsilon(1e-12));
    }
    CHECK(tube_complement_exact(TubeQuery(2, 1, kPi / 6.0)) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tube_complement_exact(TubeQuery(5, 3, kHalfPi)) == 0.0);
}

TEST_CASE("tube_complement_exact against seeded Monte Carlo") {
    const int n = 10;
    const int m = 2;
    const std::size_t count = 20000;
    const RowMatrix pts = sample_sphere(n, count, 1234);
    for (double r : {0.3, 0.6, 0.9}) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < count; ++i) {
            const auto row = pts.row(i);
            double s = 0.0;
            for (int j = 0; j < m; ++j) s += row[j] * row[j];
            if (std::asin(std::min(1.0, std::sqrt(s))) >= r) ++hits;
        }
        const double p = tube_complement_exact(TubeQuery(n, m, r));
        const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(count));
        CHECK(std::fabs(static_cast<double>(hits) / count - p) < 4.0 * sigma);
    }
}

TEST_CASE("tube bound dominates the exact measure") {
    for (int n : {10, 50, 200}) {
        for (int m : {1, 3, n / 2}) {
            for (int k = 0; k <= 50; ++k) {
                const double r = kHalfPi * k / 50.0;
                const TubeQuery q(n, m, r);
                CHECK(tube_complement_exact(q) <= cor41_bound(q).value() + 1e-12);
            }
        }
    }
}

TEST_CASE("tube bound is the reparametrized manifold bound") {
    for (int n : {10, 50, 200}) {
        for (int m : {1, 3, 7}) {
            for (double r : {0.1, 0.4, 0.9, 1.4}) {
                const double direct = cor41_bound(TubeQuery(n, m, r)).log_value;
                const double spectral =
                    cor_manifold_tail(ManifoldBoundKind::SpectralGap,
                                      static_cast<double>(n), m, 2.0 * r / kPi)
                        .log_value;
                const double ricci =
                    cor_manifold_tail(ManifoldBoundKind::RicciLowerBound, n - 1.0,
                                      m, 2.0 * r / kPi)
                        .log_value;
                const double composed = std::min(spectral, ricci);
                CHECK(direct ==
                      doctest::Approx(composed).epsilon(1e-12).scale(
                          std::max(1.0, std::fabs(composed))));
            }
        }
    }
    CHECK(cor41_bound(TubeQuery(20, 3, 0.0)).value() == 1.0);
}

TEST_CASE("complementary coordinate split") {
    // tube(n, m, r) + tube(n, n+1-m, pi/2 - r) = 1.
    for (int n : {3, 8, 17}) {
        for (int m = 1; m <= n; ++m) {
            for (double r : {0.1, 0.5, 1.0, 1.5}) {
                const double a = tube_complement_exact(TubeQuery(n, m, r));
                const double b =
                    tube_complement_exact(TubeQuery(n, n + 1 - m, kHalfPi - r));
                CHECK(a + b == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("artstein_u") {
    // sin^2 r = 1 - lambda kills both logs' weights.
    for (double r : {0.4, 0.8, 1.2}) {
        const double lambda = std::cos(r) * std::cos(r);
        CHECK(std::fabs(artstein_u(r, lambda)) < 1e-14);
    }
    CHECK(artstein_u(kPi / 3.0, 0.5) ==
          doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-12));
    CHECK(artstein_u(kPi / 3.0, 0.5) == doctest::Approx(0.143841).epsilon(1e-5));

    for (int i = 1; i <= 100; ++i) {
        for (int j = 1; j <= 100; ++j) {
            const double r = kHalfPi * i / 101.0;
            const double lambda = static_cast<double>(j) / 101.0;
            CHECK(artstein_u(r, lambda) >= -1e-15);
        }
    }
    CHECK_THROWS_AS(artstein_u(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(artstein_u(kHalfPi, 0.5), std::domain_error);
    CHECK_THROWS_AS(artstein_u(0.5, 0.0), std::domain_error);
}

TEST_CASE("artstein_asymptotic") {
    // Worked value at n=100, lambda=1/2, r=pi/3.
    const double u = 0.5 * std::log(4.0 / 3.0);
    const double expected = (1.0 / std::sqrt(100.0 * kPi)) * (0.5 / 0.25) *
                            std::exp(-50.0 * u);
    CHECK(artstein_asymptotic(100, 0.5, kPi / 3.0) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(artstein_asymptotic(100, 0.5, kPi / 3.0) ==
          doctest::Approx(8.49e-5).epsilon(2e-3));

    // Complement branch: one minus the signed leading term.
    const double r2 = 0.5; // sin^2 = 0.2298 < 1 - lambda
    const double lam = 0.5;
    const double gap = std::sin(r2) * std::sin(r2) - (1.0 - lam);
    const double signed_term = std::sqrt(lam * (1.0 - lam) / (100.0 * kPi)) / gap *
                               std::exp(-50.0 * artstein_u(r2, lam));
    CHECK(artstein_asymptotic(100, lam, r2) ==
          doctest::Approx(1.0 - signed_term).epsilon(1e-12));

    const double pole_r = std::asin(std::sqrt(0.5));
    CHECK_THROWS_AS(artstein_asymptotic(100, 0.5, pole_r), std::domain_error);
}

TEST_CASE("asymptotic ratio approaches one as n grows") {
    const double r = kPi / 3.0;
    double prev_gap = 2.0;
    for (int n : {100, 200, 400}) {
        const double exact = tube_complement_exact(TubeQuery(n, n / 2, r));
        const double approx = artstein_asymptotic(n, 0.5, r);
        const double gap = std::fabs(exact / approx - 1.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("artstein_bracket wiring") {
    const int n = 20;
    const int m = 10;
    const double r = 0.6; // sin^2 r = 0.319 < 1 - lambda = 0.5
    const auto b = artstein_bracket(n, m, r, 1.0, 1.0);
    CHECK_FALSE(b.complement_case);
    CHECK(b.u == doctest::Approx(0.5 * n * artstein_u(r, 0.5)).epsilon(1e-12));
    CHECK(b.lower <= b.upper);

    const auto b2 = artstein_bracket(n, m, 1.0, 1.0, 1.0);
    CHECK(b2.complement_case);
    CHECK(b2.lower <= b2.upper);

    CHECK_THROWS_AS(artstein_bracket(n, m, r, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(artstein_bracket(n, m, r, 1.0, 3.5), std::domain_error);
    CHECK_THROWS_AS(artstein_bracket(4, 3, r, 1.0, 1.0), std::domain_error);
    // sqrt argument driven nonpositive.
    CHECK_THROWS_AS(artstein_bracket(12, 3, std::asin(std::sqrt(0.7)), 0.01, 1.0),
                    std::domain_error);
}

TEST_CASE("artstein_bracket paired sweep keeps lower <= upper") {
    // With c' = c the displayed lower expression never exceeds the upper one
    // in either case regime at the tested configurations. (Independent
    // (c, c') pairs can invert; the theorem only promises one good pair.)
    for (int n : {20, 50}) {
        const int m = n / 2;
        for (double r : {0.6, 1.0}) {
            for (int k = 0; k < 64; ++k) {
                const double c =
                    std::exp(std::log(1e-3) +
                             (std::log(3.0) - std::log(1e-3)) * k / 63.0);
                const auto b = artstein_bracket(n, m, r, c, c);
                CHECK(b.lower <= b.upper + 1e-15);
            }
        }
    }
}

TEST_CASE("artstein_bracket envelope contains the exact tube measure") {
    for (int n : {20, 50}) {
        const int m = n / 2;
        for (double r : {0.6, 1.0}) {
            const double exact =
                1.0 - tube_complement_exact(TubeQuery(n, n - m, r));
            double lower_env = 1.0;
            double upper_env = 0.0;
            for (int k = 0; k < 64; ++k) {
                const double c =
                    std::exp(std::log(1e-3) +
                             (std::log(3.0) - std::log(1e-3)) * k / 63.0);
                const auto b = artstein_bracket(n, m, r, c, c);
                lower_env = std::min(lower_env, b.lower);
                upper_env = std::max(upper_env, b.upper);
            }
            CHECK(lower_env <= exact);
            CHECK(exact <= upper_env);
        }
    }
}

TEST_CASE("TubeQuery validation") {
    CHECK_THROWS_AS(TubeQuery(5, 0, 0.5), std::domain_error);
    CHECK_THROWS_AS(TubeQuery(5, 6, 0.5), std::domain_error);
    CHECK_THROWS_AS(TubeQuery(5, 2, -0.1), std::domain_error);
    CHECK_THROWS_AS(TubeQuery(5, 2, 2.0), std::domain_error);
}
