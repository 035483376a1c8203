#pragma once

#include <optional>
#include <span>
#include <vector>

#include "conclab/geometry.hpp"
#include "conclab/row_matrix.hpp"

namespace conclab {

enum class PointSpace { Euclidean, Sphere, Hyperbolic };

// Finite-support probability measure: one point per row, weights summing
// to one.
struct EmpiricalMeasure {
    PointSpace space = PointSpace::Euclidean;
    RowMatrix points;
    std::vector<double> weights;

    // Uniform weights 1/rows.
    static EmpiricalMeasure uniform(PointSpace space, RowMatrix points);
    static EmpiricalMeasure weighted(PointSpace space, RowMatrix points,
                                     std::vector<double> weights);

    std::size_t size() const { return points.rows; }
};

struct BarycenterResult {
    HyperbolicPoint point;
    double residual = 0.0; // Minkowski norm of the mean log vector
    int iterations = 0;
    bool converged = false;
    // Value of sum w_k d(x, y_k)^2 at each iterate, recorded when the solver
    // is asked to trace.
    std::vector<double> objective_trace;
};

struct KarcherOptions {
    double tolerance = 1e-10;
    int max_iterations = 200;
    int threads = 1;
    bool trace_objective = false;
};

// Smallest value m with weight{x <= m} >= 1/2 and weight{x >= m} >= 1/2
// (lower median).
double median(std::span<const double> samples,
              std::span<const double> weights = {});

// Weighted mean, summed pairwise (deterministic for any thread count).
std::vector<double> euclidean_barycenter(const EmpiricalMeasure& nu);

// Karcher barycenter on H^m: fixed-point iteration
// x <- exp_x(sum_k w_k log_x(y_k)) started from the renormalized ambient
// mean. On a Hadamard target the objective is strictly geodesically convex,
// so a unit step converges; non-convergence within max_iterations is
// reported, not thrown.
BarycenterResult karcher_barycenter(const EmpiricalMeasure& nu,
                                    const KarcherOptions& opts = {});

// Barycenter of the pushforward of uniform sphere samples through f:
// the classical mean for Euclidean targets, the Karcher mean for hyperbolic
// ones. Returns ambient coordinates of the target point.
struct ExpectationResult {
    std::vector<double> point; // ambient coordinates in the target space
    double residual = 0.0;
    int iterations = 0;
    bool converged = true;
};

ExpectationResult expectation_of_map(const RowMatrix& samples,
                                     const LipschitzMap& f,
                                     const KarcherOptions& opts = {});

// f0(x) = exp^{-1}_{E}(f(x)) written in an orthonormal tangent frame, one
// row per sample (target_dim columns). For Euclidean targets this is
// f(x) - E. Row norms equal d_target(f(x), E).
RowMatrix reduce_to_tangent(const RowMatrix& images, const LipschitzMap& f,
                            std::span<const double> expectation_point,
                            int threads = 1);

} // namespace conclab
