#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "conclab/barycenter.hpp"
#include "conclab/rng.hpp"
#include "oracles.hpp"

using namespace conclab;

namespace {

RowMatrix random_hyp_cloud(CounterRng& rng, std::size_t count, int dim,
                           double radius) {
    RowMatrix out(count, static_cast<std::size_t>(dim) + 1);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> z(static_cast<std::size_t>(dim));
        for (double& c : z) c = radius * (2.0 * rng.next_unit() - 1.0);
        const auto p = hyperbolic_embed(z, 1.0);
        auto row = out.row(i);
        std::copy(p.coords.begin(), p.coords.end(), row.begin());
    }
    return out;
}

} // namespace

TEST_CASE("median contract on small inputs") {
    CHECK(median(std::vector<double>{0.0, 1.0, 2.0}) == 1.0);
    // Tie: both 0 and 1 are medians, the lower one is returned.
    CHECK(median(std::vector<double>{0.0, 1.0}) == 0.0);
    CHECK(median(std::vector<double>{5.0}) == 5.0);
    CHECK(median(std::vector<double>{3.0, 3.0, 3.0, 3.0}) == 3.0);
    CHECK_THROWS_AS(median(std::vector<double>{}), std::domain_error);
}

TEST_CASE("median half-mass inequalities on random weighted inputs") {
    CounterRng rng(17, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + (rng.next_u64() % 25);
        std::vector<double> vals(n);
        std::vector<double> weights(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Coarse grid of values forces ties.
            vals[i] = std::floor(10.0 * rng.next_unit()) / 4.0;
            weights[i] = 0.05 + rng.next_unit();
        }
        double total = 0.0;
        for (double w : weights) total += w;
        for (double& w : weights) w /= total;

        const double m = median(vals, weights);
        double at_most = 0.0;
        double at_least = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (vals[i] <= m) at_most += weights[i];
            if (vals[i] >= m) at_least += weights[i];
        }
        CHECK(at_most >= 0.5 - 1e-9);
        CHECK(at_least >= 0.5 - 1e-9);

        // Lower tie-break: no smaller sample value satisfies both inequalities.
        for (std::size_t i = 0; i < n; ++i) {
            if (vals[i] >= m) continue;
            double le = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (vals[j] <= vals[i]) le += weights[j];
            CHECK(le < 0.5);
        }
    }
}

TEST_CASE("median of the first sphere coordinate is near zero") {
    const std::size_t n_samples = 100000;
    const RowMatrix pts = sample_sphere(10, n_samples, 555, 4);
    std::vector<double> x1(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) x1[i] = pts.row(i)[0];
    CHECK(std::fabs(median(x1)) < 4.0 / std::sqrt(static_cast<double>(n_samples)));
}

TEST_CASE("euclidean_barycenter basics and summation oracle") {
    RowMatrix single(1, 3);
    single.row(0)[0] = 1.5;
    single.row(0)[1] = -2.0;
    single.row(0)[2] = 0.25;
    const auto only = euclidean_barycenter(
        EmpiricalMeasure::uniform(PointSpace::Euclidean, single));
    CHECK(only == std::vector<double>{1.5, -2.0, 0.25});

    RowMatrix two(2, 2);
    two.row(0)[0] = 0.0;
    two.row(0)[1] = 0.0;
    two.row(1)[0] = 2.0;
    two.row(1)[1] = 0.0;
    const auto mid =
        euclidean_barycenter(EmpiricalMeasure::uniform(PointSpace::Euclidean, two));
    CHECK(mid[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mid[1] == 0.0);

    // Against a naive left-to-right weighted loop.
    CounterRng rng(23, 0);
    RowMatrix cloud(1000, 5);
    std::vector<double> weights(1000);
    double total = 0.0;
    for (std::size_t i = 0; i < cloud.rows; ++i) {
        for (std::size_t j = 0; j < cloud.cols; ++j)
            cloud.row(i)[j] = 2.0 * rng.next_unit() - 1.0;
        weights[i] = 0.01 + rng.next_unit();
        total += weights[i];
    }
    for (double& w : weights) w /= total;
    const auto fast = euclidean_barycenter(
        EmpiricalMeasure::weighted(PointSpace::Euclidean, cloud, weights));
    const auto naive =
        oracles::naive_weighted_mean(cloud.data, cloud.rows, cloud.cols, weights);
    for (std::size_t j = 0; j < fast.size(); ++j) {
        CHECK(fast[j] == doctest::Approx(naive[j]).epsilon(1e-14).scale(1.0));
    }
}

TEST_CASE("karcher_barycenter on a single point") {
    CounterRng rng(29, 0);
    const RowMatrix cloud = random_hyp_cloud(rng, 1, 3, 1.5);
    const auto result = karcher_barycenter(
        EmpiricalMeasure::uniform(PointSpace::Hyperbolic, cloud));
    CHECK(result.converged);
    CHECK(result.iterations <= 1);
    CHECK(result.residual <= 1e-10);
    CHECK(hyp_distance_span(result.point.coords, cloud.row(0)) < 1e-12);
}

TEST_CASE("karcher_barycenter two-point midpoint") {
    CounterRng rng(31, 0);
    const RowMatrix cloud = random_hyp_cloud(rng, 2, 3, 1.5);
    const auto result = karcher_barycenter(
        EmpiricalMeasure::uniform(PointSpace::Hyperbolic, cloud));
    REQUIRE(result.converged);
    const double d01 = hyp_distance_span(cloud.row(0), cloud.row(1));
    const double d0 = hyp_distance_span(result.point.coords, cloud.row(0));
    const double d1 = hyp_distance_span(result.point.coords, cloud.row(1));
    CHECK(d0 == doctest::Approx(0.5 * d01).epsilon(1e-8));
    CHECK(d1 == doctest::Approx(0.5 * d01).epsilon(1e-8));
}

TEST_CASE("karcher_barycenter 50 points in H^3 against a compass-search oracle") {
    CounterRng rng(37, 0);
    const RowMatrix cloud = random_hyp_cloud(rng, 50, 3, 1.2);
    const auto measure = EmpiricalMeasure::uniform(PointSpace::Hyperbolic, cloud);
    KarcherOptions opts;
    opts.trace_objective = true;
    const auto result = karcher_barycenter(measure, opts);
    REQUIRE(result.converged);
    CHECK(result.residual <= 1e-9);

    // Objective is non-increasing along the iterates.
    for (std::size_t k = 1; k < result.objective_trace.size(); ++k) {
        CHECK(result.objective_trace[k] <= result.objective_trace[k - 1] + 1e-13);
    }

    // Chart z -> (sqrt(1+|z|^2), z); derivative-free minimization of the
    // squared-distance objective, no log/exp maps involved.
    auto lift = [](std::span<const double> z) {
        std::vector<double> p(z.size() + 1);
        double s = 1.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            p[i + 1] = z[i];
            s += z[i] * z[i];
        }
        p[0] = std::sqrt(s);
        return p;
    };
    auto objective = [&](std::span<const double> z) {
        const auto p = lift(z);
        double total = 0.0;
        for (std::size_t i = 0; i < cloud.rows; ++i) {
            const double d = hyp_distance_span(p, cloud.row(i));
            total += d * d / static_cast<double>(cloud.rows);
        }
        return total;
    };
    const std::vector<double> start(3, 0.0);
    const auto zmin = oracles::compass_minimize(objective, start, 0.5, 1e-10);
    const auto oracle_point = lift(zmin);
    CHECK(hyp_distance_span(result.point.coords, oracle_point) < 1e-6);
}

TEST_CASE("karcher_barycenter reports non-convergence instead of throwing") {
    CounterRng rng(41, 0);
    const RowMatrix cloud = random_hyp_cloud(rng, 20, 2, 1.5);
    KarcherOptions opts;
    opts.tolerance = 1e-30; // unreachable
    opts.max_iterations = 2;
    const auto result = karcher_barycenter(
        EmpiricalMeasure::uniform(PointSpace::Hyperbolic, cloud), opts);
    CHECK_FALSE(result.converged);
    CHECK(result.iterations == 2);
}

TEST_CASE("empirical measure validation") {
    RowMatrix cloud(2, 3);
    CHECK_THROWS_AS(EmpiricalMeasure::weighted(PointSpace::Euclidean, cloud,
                                               {0.5, 0.6}),
                    std::domain_error);
    CHECK_THROWS_AS(EmpiricalMeasure::weighted(PointSpace::Euclidean, cloud,
                                               {1.5, -0.5}),
                    std::domain_error);
    CHECK_THROWS_AS(EmpiricalMeasure::uniform(PointSpace::Euclidean, RowMatrix()),
                    std::domain_error);
}

TEST_CASE("expectation_of_map") {
    SUBCASE("projection of uniform sphere samples is near zero") {
        const std::size_t n_samples = 100000;
        const int n = 20;
        const int m = 3;
        const RowMatrix pts = sample_sphere(n, n_samples, 808, 4);
        KarcherOptions opts;
        opts.threads = 4;
        const auto e =
            expectation_of_map(pts, LipschitzMap::projection(n, m), opts);
        CHECK(euclidean_norm(e.point) <
              4.0 * std::sqrt(static_cast<double>(m) / (n + 1.0)) /
                  std::sqrt(static_cast<double>(n_samples)));
    }
    SUBCASE("embedded projection lands near the hyperbolic origin") {
        const std::size_t n_samples = 100000;
        const int n = 50;
        const RowMatrix pts = sample_sphere(n, n_samples, 809, 4);
        KarcherOptions opts;
        opts.threads = 4;
        const auto e = expectation_of_map(
            pts, LipschitzMap::hyperbolic_projection(n, 2, default_embed_scale()),
            opts);
        CHECK(e.converged);
        const auto origin = HyperbolicPoint::origin(2);
        CHECK(hyp_distance_span(e.point, origin.coords) < 0.1);
    }
}

TEST_CASE("reduce_to_tangent") {
    SUBCASE("euclidean target subtracts the expectation") {
        const int n = 10;
        const RowMatrix pts = sample_sphere(n, 500, 47);
        const auto f = LipschitzMap::projection(n, 4);
        const RowMatrix images = f.apply_all(pts);
        const auto e = expectation_of_map(pts, f);
        const RowMatrix f0 = reduce_to_tangent(images, f, e.point);
        for (std::size_t i = 0; i < images.rows; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                CHECK(f0.row(i)[j] ==
                      doctest::Approx(images.row(i)[j] - e.point[j]).epsilon(1e-15));
            }
        }
    }
    SUBCASE("constant map maps to zero vectors") {
        // A single-point pushforward: expectation equals the image.
        const int n = 6;
        RowMatrix pts = sample_sphere(n, 100, 48);
        for (std::size_t i = 1; i < pts.rows; ++i) {
            auto dst = pts.row(i);
            auto src = pts.row(0);
            std::copy(src.begin(), src.end(), dst.begin());
        }
        const auto f = LipschitzMap::hyperbolic_projection(n, 3, default_embed_scale());
        const RowMatrix images = f.apply_all(pts);
        const auto e = expectation_of_map(pts, f);
        const RowMatrix f0 = reduce_to_tangent(images, f, e.point);
        for (std::size_t i = 0; i < f0.rows; ++i) {
            CHECK(euclidean_norm(f0.row(i)) < 1e-9);
        }
    }
    SUBCASE("norm identity and mean-zero on hyperbolic targets") {
        const int n = 12;
        const std::size_t n_samples = 1000;
        const RowMatrix pts = sample_sphere(n, n_samples, 49);
        const auto f = LipschitzMap::hyperbolic_projection(n, 3, default_embed_scale());
        const RowMatrix images = f.apply_all(pts);
        KarcherOptions opts;
        const auto e = expectation_of_map(pts, f, opts);
        REQUIRE(e.converged);
        const RowMatrix f0 = reduce_to_tangent(images, f, e.point);
        std::vector<double> mean(3, 0.0);
        for (std::size_t i = 0; i < f0.rows; ++i) {
            CHECK(euclidean_norm(f0.row(i)) ==
                  doctest::Approx(hyp_distance_span(images.row(i), e.point))
                      .epsilon(1e-10));
            for (std::size_t j = 0; j < 3; ++j) mean[j] += f0.row(i)[j];
        }
        for (double& c : mean) c /= static_cast<double>(f0.rows);
        CHECK(euclidean_norm(mean) <= opts.tolerance + 1e-9);
    }
}
