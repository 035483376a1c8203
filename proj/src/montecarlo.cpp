#include "conclab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conclab/parallel.hpp"
#include "conclab/rng.hpp"
#include "conclab/sphere_exact.hpp"
#include "conclab/specfun.hpp"

namespace conclab {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

std::vector<double> default_r_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 30; ++k) g.push_back(0.05 * k);
    return g;
}

// Exact law of the uncentered linear radius |P_m x| for uniform x on S^n.
// The report's empirical column is centered at the barycenter; the
// difference is second order in the centering drift and sits far inside the
// 4-sigma slack.
double projection_radius_tail(int n, int m, double r) {
    if (r <= 0.0) return 1.0;
    if (r >= 1.0) return 0.0;
    return 1.0 - specfun::reg_inc_beta(m / 2.0, (n + 1.0 - m) / 2.0, r * r);
}

std::vector<double> sorted_copy(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return s;
}

std::size_t count_at_least(const std::vector<double>& sorted_vals, double r) {
    return sorted_vals.size() -
           static_cast<std::size_t>(std::lower_bound(sorted_vals.begin(),
                                                     sorted_vals.end(), r) -
                                    sorted_vals.begin());
}

// |f0_i - f0_j| over all unordered pairs of the leading subsample.
std::vector<double> pair_distances(const RowMatrix& f0, std::size_t cap) {
    const std::size_t k = std::min(f0.rows, cap);
    std::vector<double> out;
    out.reserve(k * (k - 1) / 2);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            out.push_back(euclidean_distance(f0.row(i), f0.row(j)));
        }
    }
    return out;
}

double mean_pow(std::span<const double> values, double q) {
    const double sum = pairwise_sum_indexed(
        values.size(), [&](std::size_t i) { return std::pow(values[i], q); });
    return sum / static_cast<double>(values.size());
}

} // namespace

void ExperimentConfig::validate() const {
    if (samples < 100) throw std::domain_error("ExperimentConfig: need N >= 100");
    if (sphere_dim < 2) throw std::domain_error("ExperimentConfig: need n >= 2");
    if (r_grid.empty()) throw std::domain_error("ExperimentConfig: empty r grid");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0)) throw std::domain_error("ExperimentConfig: radii must be positive");
        if (i > 0 && !(r_grid[i] > r_grid[i - 1]))
            throw std::domain_error("ExperimentConfig: r grid must be strictly increasing");
    }
    for (double q : q_list)
        if (!(q >= 1.0)) throw std::domain_error("ExperimentConfig: moment orders must be >= 1");
    if (map.source_dim != sphere_dim)
        throw std::domain_error("ExperimentConfig: map source dimension != n");
}

std::vector<double> empirical_tail(std::span<const double> distances,
                                   std::span<const double> r_grid) {
    const std::vector<double> sorted_vals = sorted_copy(distances);
    std::vector<double> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        out.push_back(static_cast<double>(count_at_least(sorted_vals, r)) /
                      static_cast<double>(sorted_vals.size()));
    }
    return out;
}

Moments empirical_moments(const RowMatrix& f0, double q, std::size_t pair_cap) {
    if (!(q >= 1.0)) throw std::domain_error("empirical_moments: q must be >= 1");
    Moments m;
    const double vq_qth = pairwise_sum_indexed(f0.rows, [&](std::size_t i) {
        return std::pow(euclidean_norm(f0.row(i)), q);
    }) / static_cast<double>(f0.rows);
    m.v_q = std::pow(vq_qth, 1.0 / q);
    const std::vector<double> pd = pair_distances(f0, pair_cap);
    m.v_tilde_q = pd.empty() ? 0.0 : std::pow(mean_pow(pd, q), 1.0 / q);
    return m;
}

std::vector<double> median_deviation_tail(std::span<const double> phi,
                                          std::span<const double> r_grid) {
    const double med = median(phi);
    std::vector<double> devs(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) devs[i] = std::fabs(phi[i] - med);
    return empirical_tail(devs, r_grid);
}

std::vector<double> two_point_deviation_tail(std::span<const double> phi,
                                             std::span<const double> r_grid,
                                             std::size_t pair_cap) {
    const std::size_t k = std::min(phi.size(), pair_cap);
    std::vector<double> diffs;
    diffs.reserve(k * (k - 1) / 2);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            diffs.push_back(std::fabs(phi[i] - phi[j]));
    return empirical_tail(diffs, r_grid);
}

double binomial_slack(double p, std::size_t n) {
    const double pc = std::clamp(p, 0.0, 1.0);
    return 4.0 * std::sqrt(pc * (1.0 - pc) / static_cast<double>(n));
}

VerificationReport run_verification(const ExperimentConfig& config_in) {
    ExperimentConfig config = config_in;
    if (config.r_grid.empty()) config.r_grid = default_r_grid();
    if (config.q_list.empty()) config.q_list = {1.0, 2.0, 4.0};
    config.validate();

    const int n = config.sphere_dim;
    const int m = config.map.target_dim;
    const std::size_t count = config.samples;

    VerificationReport report;
    report.config = config;

    const RowMatrix samples = sample_sphere(n, count, config.seed, config.threads);
    const RowMatrix images = config.map.apply_all(samples, config.threads);

    // Expectation of the pushforward.
    if (config.map.target_space() == TargetSpace::Euclidean) {
        report.expectation.point = euclidean_barycenter(
            EmpiricalMeasure::uniform(PointSpace::Euclidean, images));
    } else {
        KarcherOptions opts = config.karcher;
        opts.threads = config.threads;
        const BarycenterResult bary = karcher_barycenter(
            EmpiricalMeasure::uniform(PointSpace::Hyperbolic, images), opts);
        report.expectation.point = bary.point.coords;
        report.expectation.residual = bary.residual;
        report.expectation.iterations = bary.iterations;
        report.expectation.converged = bary.converged;
    }

    const RowMatrix f0 = reduce_to_tangent(images, config.map,
                                           report.expectation.point,
                                           config.threads);

    std::vector<double> norms(count);
    std::vector<double> direct(count);
    parallel_for(count, config.threads, [&](std::size_t i) {
        norms[i] = euclidean_norm(f0.row(i));
        direct[i] = config.map.target_distance(images.row(i),
                                               report.expectation.point);
    });
    const std::vector<double> norms_sorted = sorted_copy(norms);
    const std::vector<double> direct_sorted = sorted_copy(direct);

    std::vector<double> mean_f0(static_cast<std::size_t>(m), 0.0);
    for (std::size_t j = 0; j < mean_f0.size(); ++j) {
        mean_f0[j] = pairwise_sum_indexed(count, [&](std::size_t i) {
                         return f0.data[i * f0.cols + j];
                     }) / static_cast<double>(count);
    }
    report.mean_f0_norm = euclidean_norm(mean_f0);
    report.v2 = std::sqrt(mean_pow(norms, 2.0));

    const bool projection_like = config.map.kind != MapKind::HyperbolicProjection;
    const ConcentrationProfile prof_exp = sphere_exponential_profile(n);
    const ConcentrationProfile prof_gauss = sphere_gaussian_profile(n);

    report.tail_identity_exact = true;
    for (double r : config.r_grid) {
        TailRow row;
        row.r = r;
        const std::size_t hits = count_at_least(norms_sorted, r);
        if (hits != count_at_least(direct_sorted, r)) report.tail_identity_exact = false;
        row.empirical = static_cast<double>(hits) / static_cast<double>(count);
        row.slack = binomial_slack(row.empirical, count);
        if (projection_like) row.exact = projection_radius_tail(n, m, r);

        std::optional<BoundValue> thm;
        if (config.use_thm_exponential) thm = thm_main_tail(prof_exp, m, r);
        if (config.use_thm_gaussian) {
            const BoundValue g = thm_main_tail(prof_gauss, m, r);
            thm = thm ? min(*thm, g) : g;
        }
        if (thm) row.bound_thm_main = thm->value();
        if (config.use_gromov)
            row.bound_gromov = gromov_bound(static_cast<double>(n), m, r).value();
        if (config.use_cor41 && projection_like)
            row.bound_cor41 = cor41_bound_at(n, m, r).value();

        double tightest = 2.0; // above any probability: marks "no bound selected"
        for (const auto& b : {row.bound_thm_main, row.bound_gromov, row.bound_cor41})
            if (b && *b < tightest) tightest = *b;
        row.margin = tightest <= 1.0 ? tightest + row.slack - row.empirical : 0.0;

        const double expected_hits =
            static_cast<double>(count) * row.exact.value_or(row.empirical);
        if (tightest <= 1.0 && expected_hits >= kMinExpectedHits &&
            row.empirical > tightest + row.slack) {
            report.violations.push_back(
                {"tail_bound", r, row.empirical, tightest, row.slack});
        }
        if (row.exact && static_cast<double>(count) * *row.exact >= kMinExpectedHits) {
            const double s = binomial_slack(*row.exact, count);
            if (std::fabs(row.empirical - *row.exact) > s) {
                report.violations.push_back(
                    {"tail_exact", r, row.empirical, *row.exact, s});
            }
        }
        report.tail_rows.push_back(row);
    }

    // Moment rows, with the Gaussian sphere profile driving both bounds.
    for (double q : config.q_list) {
        MomentRow row;
        row.q = q;
        const Moments mom = empirical_moments(f0, q, config.pair_cap);
        row.v_q = mom.v_q;
        row.v_tilde_q = mom.v_tilde_q;
        row.bound_first_qth = vq_bound_first(prof_gauss, m, q);
        row.bound_second_qth = vq_bound_second(prof_gauss, m, q);
        const double vq_qth = std::pow(mom.v_q, q);
        const double var_qth =
            std::max(0.0, mean_pow(norms, 2.0 * q) - vq_qth * vq_qth);
        const double slack = 4.0 * std::sqrt(var_qth / static_cast<double>(count));
        if (vq_qth > row.bound_first_qth + slack)
            report.violations.push_back(
                {"moment_first", q, vq_qth, row.bound_first_qth, slack});
        if (vq_qth > row.bound_second_qth + slack)
            report.violations.push_back(
                {"moment_second", q, vq_qth, row.bound_second_qth, slack});
        if (mom.v_q > mom.v_tilde_q + report.mean_f0_norm + 1e-12)
            report.violations.push_back({"moment_pair_domination", q, mom.v_q,
                                         mom.v_tilde_q, report.mean_f0_norm});
        report.moment_rows.push_back(row);
    }

    // Median and two-point deviation rows for real-valued maps.
    if (config.lemma_tails && config.map.ambient_target_dim() == 1) {
        std::vector<double> phi(count);
        for (std::size_t i = 0; i < count; ++i) phi[i] = images.data[i];
        const std::vector<double> med_tail = median_deviation_tail(phi, config.r_grid);
        const std::vector<double> two_tail =
            two_point_deviation_tail(phi, config.r_grid, config.pair_cap);
        const std::size_t pair_points = std::min(count, config.pair_cap);
        for (std::size_t k = 0; k < config.r_grid.size(); ++k) {
            LemmaRow row;
            row.r = config.r_grid[k];
            row.median_dev_empirical = med_tail[k];
            row.median_dev_bound = std::min(1.0, 2.0 * alpha_sphere_exact(n, row.r));
            row.two_point_empirical = two_tail[k];
            row.two_point_bound =
                std::min(1.0, 2.0 * alpha_sphere_exact(n, row.r / 2.0));
            const double med_slack = binomial_slack(row.median_dev_empirical, count);
            // Pairs are dependent; the number of distinct points governs the
            // fluctuation order, so the slack uses that count.
            const double two_slack =
                binomial_slack(row.two_point_empirical, pair_points);
            if (row.median_dev_empirical * static_cast<double>(count) >= kMinExpectedHits &&
                row.median_dev_empirical > row.median_dev_bound + med_slack) {
                report.violations.push_back({"lemma_median", row.r,
                                             row.median_dev_empirical,
                                             row.median_dev_bound, med_slack});
            }
            if (row.two_point_empirical * static_cast<double>(pair_points) >= kMinExpectedHits &&
                row.two_point_empirical > row.two_point_bound + two_slack) {
                report.violations.push_back({"lemma_two_point", row.r,
                                             row.two_point_empirical,
                                             row.two_point_bound, two_slack});
            }
            report.lemma_rows.push_back(row);
        }
    }

    // First grid radius past which the exponential-profile bound stays below
    // Gromov's.
    if (config.use_thm_exponential && config.use_gromov) {
        std::optional<double> cross;
        for (auto it = config.r_grid.rbegin(); it != config.r_grid.rend(); ++it) {
            const double thm = thm_main_tail(prof_exp, m, *it).value();
            const double gro = gromov_bound(static_cast<double>(n), m, *it).value();
            if (thm < gro)
                cross = *it;
            else
                break;
        }
        report.crossover_r = cross;
    }

    if (!report.expectation.converged) {
        report.violations.push_back({"barycenter_not_converged", 0.0,
                                     report.expectation.residual,
                                     config.karcher.tolerance, 0.0});
    }
    const double drift_budget =
        config.karcher.tolerance +
        6.0 * report.v2 / std::sqrt(static_cast<double>(count));
    if (report.mean_f0_norm > drift_budget) {
        report.violations.push_back(
            {"expectation_drift", 0.0, report.mean_f0_norm, drift_budget, 0.0});
    }

    return report;
}

std::vector<ExperimentConfig> standard_preset(std::uint64_t seed,
                                              std::size_t samples, int threads) {
    std::vector<ExperimentConfig> configs;
    std::uint64_t index = 0;
    for (int n : {20, 50}) {
        for (int m : {1, 2, 5}) {
            for (int hyperbolic = 0; hyperbolic < 2; ++hyperbolic) {
                ExperimentConfig c;
                c.sphere_dim = n;
                c.map = hyperbolic
                            ? LipschitzMap::hyperbolic_projection(
                                  n, m, default_embed_scale())
                            : LipschitzMap::projection(n, m);
                c.name = "S" + std::to_string(n) + "_" + c.map.name();
                c.samples = samples;
                c.seed = mix64(seed ^ (0x9E3779B97F4A7C15ULL * ++index));
                c.r_grid = default_r_grid();
                c.q_list = {1.0, 2.0, 4.0};
                c.threads = threads;
                configs.push_back(std::move(c));
            }
        }
    }
    ExperimentConfig lemma;
    lemma.sphere_dim = 30;
    lemma.map = LipschitzMap::coordinate_map(30, 0);
    lemma.name = "S30_coord0_lemmas";
    lemma.samples = samples;
    lemma.seed = mix64(seed ^ (0x9E3779B97F4A7C15ULL * ++index));
    lemma.r_grid = default_r_grid();
    lemma.q_list = {1.0, 2.0, 4.0};
    lemma.lemma_tails = true;
    lemma.threads = threads;
    configs.push_back(std::move(lemma));
    return configs;
}

std::vector<ExperimentConfig> smoke_preset(std::uint64_t seed, int threads) {
    auto configs = standard_preset(seed, 2000, threads);
    std::vector<ExperimentConfig> keep;
    for (auto& c : configs) {
        if (c.sphere_dim == 20 && c.map.target_dim == 2) keep.push_back(c);
        if (c.lemma_tails) keep.push_back(c);
    }
    return keep;
}

VerificationRun run_preset(const std::string& preset, std::uint64_t seed,
                           int threads) {
    VerificationRun run;
    run.seed = seed;
    run.threads = threads;
    run.rng_algorithm = CounterRng::algorithm_id;
    run.preset = preset;
    std::vector<ExperimentConfig> configs;
    if (preset == "standard")
        configs = standard_preset(seed, 100000, threads);
    else if (preset == "smoke")
        configs = smoke_preset(seed, threads);
    else
        throw std::domain_error("unknown preset: " + preset);
    for (const auto& c : configs) {
        run.experiments.push_back(run_verification(c));
        run.violations_total += run.experiments.back().violations.size();
    }
    return run;
}

} // namespace conclab
