#include "conclab/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "conclab/parallel.hpp"

namespace conclab {

namespace {

void validate_measure(const EmpiricalMeasure& nu) {
    if (nu.points.rows == 0) throw std::domain_error("EmpiricalMeasure: empty support");
    if (nu.weights.size() != nu.points.rows)
        throw std::domain_error("EmpiricalMeasure: weight count != point count");
    double sum = 0.0;
    for (double w : nu.weights) {
        if (!(w >= 0.0)) throw std::domain_error("EmpiricalMeasure: negative weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::domain_error("EmpiricalMeasure: weights must sum to 1");
}

// Ambient weighted mean renormalized onto the sheet. A convex combination of
// upper-sheet points is timelike, so the normalization is well defined.
HyperbolicPoint ambient_mean_start(const EmpiricalMeasure& nu) {
    std::vector<double> mean(nu.points.cols, 0.0);
    for (std::size_t j = 0; j < nu.points.cols; ++j) {
        mean[j] = pairwise_sum_indexed(nu.points.rows, [&](std::size_t i) {
            return nu.weights[i] * nu.points.data[i * nu.points.cols + j];
        });
    }
    const double n2 = -minkowski_dot(mean, mean);
    const double s = 1.0 / std::sqrt(n2);
    for (double& c : mean) c *= s;
    return HyperbolicPoint(std::move(mean));
}

} // namespace

EmpiricalMeasure EmpiricalMeasure::uniform(PointSpace space, RowMatrix points) {
    EmpiricalMeasure nu;
    nu.space = space;
    nu.points = std::move(points);
    nu.weights.assign(nu.points.rows, nu.points.rows ? 1.0 / static_cast<double>(nu.points.rows) : 0.0);
    validate_measure(nu);
    return nu;
}

EmpiricalMeasure EmpiricalMeasure::weighted(PointSpace space, RowMatrix points,
                                            std::vector<double> weights) {
    EmpiricalMeasure nu;
    nu.space = space;
    nu.points = std::move(points);
    nu.weights = std::move(weights);
    validate_measure(nu);
    return nu;
}

double median(std::span<const double> samples, std::span<const double> weights) {
    if (samples.empty()) throw std::domain_error("median: empty input");
    if (!weights.empty() && weights.size() != samples.size())
        throw std::domain_error("median: weight count mismatch");

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return samples[a] < samples[b]; });

    const double total = weights.empty()
                             ? static_cast<double>(samples.size())
                             : std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) throw std::domain_error("median: total weight must be positive");

    // Smallest sample value whose cumulative weight reaches half the mass;
    // the other half-mass inequality then holds automatically.
    double cum = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        cum += weights.empty() ? 1.0 : weights[order[k]];
        if (cum >= 0.5 * total * (1.0 - 1e-12)) return samples[order[k]];
    }
    return samples[order.back()];
}

std::vector<double> euclidean_barycenter(const EmpiricalMeasure& nu) {
    validate_measure(nu);
    if (nu.space != PointSpace::Euclidean)
        throw std::domain_error("euclidean_barycenter: measure is not Euclidean");
    std::vector<double> mean(nu.points.cols, 0.0);
    for (std::size_t j = 0; j < nu.points.cols; ++j) {
        mean[j] = pairwise_sum_indexed(nu.points.rows, [&](std::size_t i) {
            return nu.weights[i] * nu.points.data[i * nu.points.cols + j];
        });
    }
    return mean;
}

BarycenterResult karcher_barycenter(const EmpiricalMeasure& nu,
                                    const KarcherOptions& opts) {
    validate_measure(nu);
    if (nu.space != PointSpace::Hyperbolic)
        throw std::domain_error("karcher_barycenter: measure is not hyperbolic");
    if (!(opts.tolerance > 0.0))
        throw std::domain_error("karcher_barycenter: tolerance must be positive");

    const std::size_t n = nu.points.rows;
    const std::size_t dim = nu.points.cols;

    BarycenterResult result;
    result.point = ambient_mean_start(nu);

    RowMatrix logs(n, dim); // w_k * log_x(y_k), recomputed each iteration
    std::vector<double> step(dim, 0.0);

    auto mean_log_at = [&](const std::vector<double>& x) {
        parallel_for(n, opts.threads, [&](std::size_t i) {
            auto row = logs.row(i);
            hyp_log_span(x, nu.points.row(i), row);
            const double w = nu.weights[i];
            for (double& c : row) c *= w;
        });
        for (std::size_t j = 0; j < dim; ++j) {
            step[j] = pairwise_sum_indexed(
                n, [&](std::size_t i) { return logs.data[i * dim + j]; });
        }
        return std::sqrt(std::max(0.0, minkowski_dot(step, step)));
    };

    for (int iter = 0; iter <= opts.max_iterations; ++iter) {
        const auto& x = result.point.coords;
        if (opts.trace_objective) {
            result.objective_trace.push_back(pairwise_sum_indexed(n, [&](std::size_t i) {
                const double d = hyp_distance_span(x, nu.points.row(i));
                return nu.weights[i] * d * d;
            }));
        }
        result.residual = mean_log_at(x);
        result.iterations = iter;
        if (result.residual <= opts.tolerance) {
            result.converged = true;
            return result;
        }
        if (iter == opts.max_iterations) break;
        HyperbolicPoint next;
        next.coords.resize(dim);
        hyp_exp_span(x, step, next.coords);
        result.point = std::move(next);
    }
    result.converged = false;
    return result;
}

ExpectationResult expectation_of_map(const RowMatrix& samples,
                                     const LipschitzMap& f,
                                     const KarcherOptions& opts) {
    const RowMatrix images = f.apply_all(samples, opts.threads);
    ExpectationResult out;
    if (f.target_space() == TargetSpace::Euclidean) {
        out.point = euclidean_barycenter(
            EmpiricalMeasure::uniform(PointSpace::Euclidean, images));
        return out;
    }
    BarycenterResult bary = karcher_barycenter(
        EmpiricalMeasure::uniform(PointSpace::Hyperbolic, images), opts);
    out.point = bary.point.coords;
    out.residual = bary.residual;
    out.iterations = bary.iterations;
    out.converged = bary.converged;
    return out;
}

RowMatrix reduce_to_tangent(const RowMatrix& images, const LipschitzMap& f,
                            std::span<const double> expectation_point,
                            int threads) {
    const std::size_t m = static_cast<std::size_t>(f.target_dim);
    RowMatrix out(images.rows, m);
    if (f.target_space() == TargetSpace::Euclidean) {
        std::vector<double> e(expectation_point.begin(), expectation_point.end());
        parallel_for(images.rows, threads, [&](std::size_t i) {
            auto src = images.row(i);
            auto dst = out.row(i);
            for (std::size_t j = 0; j < m; ++j) dst[j] = src[j] - e[j];
        });
        return out;
    }
    const TangentFrame frame(HyperbolicPoint(
        std::vector<double>(expectation_point.begin(), expectation_point.end())));
    parallel_for(images.rows, threads, [&](std::size_t i) {
        std::vector<double> ambient(images.cols);
        hyp_log_span(frame.base().coords, images.row(i), ambient);
        frame.coordinates(ambient, out.row(i));
    });
    return out;
}

} // namespace conclab
