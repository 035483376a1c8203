#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conclab/barycenter.hpp"
#include "conclab/bounds.hpp"
#include "conclab/geometry.hpp"

namespace conclab {

// One seeded experiment: push uniform S^n samples through a 1-Lipschitz map,
// center at the barycenter, and compare empirical tails and moments against
// the selected closed-form bounds.
struct ExperimentConfig {
    std::string name;
    int sphere_dim = 10; // n
    LipschitzMap map = LipschitzMap::projection(10, 1);
    std::size_t samples = 100000; // N >= 100
    std::uint64_t seed = 42;
    std::vector<double> r_grid; // strictly increasing, positive
    std::vector<double> q_list; // moment orders, each >= 1

    bool use_thm_exponential = true; // profile (1, sqrt(n)/3, 1)
    bool use_thm_gaussian = true;    // profile (1, (n-1)/2, 2)
    bool use_gromov = true;          // lambda_1(S^n) = n
    bool use_cor41 = true;           // tube bound; projection-type maps only
    bool lemma_tails = false;        // median / two-point rows (1-d maps only)

    std::size_t pair_cap = 2000; // subsample size for pair statistics
    int threads = 1;
    KarcherOptions karcher{};

    void validate() const;
};

struct TailRow {
    double r = 0.0;
    double empirical = 0.0;
    std::optional<double> exact;
    std::optional<double> bound_thm_main; // min over selected profiles
    std::optional<double> bound_gromov;
    std::optional<double> bound_cor41;
    double margin = 0.0; // tightest bound + slack - empirical
    double slack = 0.0;  // 4 sigma binomial at the empirical frequency
};

struct MomentRow {
    double q = 0.0;
    double v_q = 0.0;
    double v_tilde_q = 0.0;
    double bound_first_qth = 0.0;  // bound on V_q^q
    double bound_second_qth = 0.0; // bound on V_q^q via the two-point route
};

struct LemmaRow {
    double r = 0.0;
    double median_dev_empirical = 0.0;
    double median_dev_bound = 0.0; // 2 alpha(r)
    double two_point_empirical = 0.0;
    double two_point_bound = 0.0; // 2 alpha(r/2)
};

struct Violation {
    std::string context;
    double at = 0.0; // grid radius or moment order
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
};

struct ExpectationSummary {
    std::vector<double> point;
    double residual = 0.0;
    int iterations = 0;
    bool converged = true;
};

struct VerificationReport {
    ExperimentConfig config;
    ExpectationSummary expectation;
    bool tail_identity_exact = true; // distance counts == |f0| counts, per r
    double mean_f0_norm = 0.0;       // centering drift
    double v2 = 0.0;
    std::vector<TailRow> tail_rows;
    std::vector<MomentRow> moment_rows;
    std::vector<LemmaRow> lemma_rows;
    std::optional<double> crossover_r; // exponential bound overtakes Gromov
    std::vector<Violation> violations;
};

// A full CLI run: several experiments under one base seed.
struct VerificationRun {
    std::uint64_t seed = 42;
    int threads = 1;
    std::string rng_algorithm;
    std::string preset;
    std::vector<VerificationReport> experiments;
    std::size_t violations_total = 0;
};

// Fraction of entries >= r for each grid value.
std::vector<double> empirical_tail(std::span<const double> distances,
                                   std::span<const double> r_grid);

struct Moments {
    double v_q = 0.0;       // (mean |f0|^q)^{1/q}
    double v_tilde_q = 0.0; // (mean over subsample pairs |f0_i - f0_j|^q)^{1/q}
};

// Pair statistics run on the first min(rows, pair_cap) points so the cost
// stays quadratic in the cap, not in the sample count.
Moments empirical_moments(const RowMatrix& f0, double q, std::size_t pair_cap);

// |phi(x) - median| tail; the report pairs it with 2 alpha_exact(r).
std::vector<double> median_deviation_tail(std::span<const double> phi,
                                          std::span<const double> r_grid);

// |phi(x) - phi(y)| tail over subsampled pairs, against 2 alpha_exact(r/2).
std::vector<double> two_point_deviation_tail(std::span<const double> phi,
                                             std::span<const double> r_grid,
                                             std::size_t pair_cap);

// 4 sqrt(p(1-p)/n): the slack convention for all tail comparisons.
double binomial_slack(double p, std::size_t n);

// Rows whose expected hit count is below this are informational only.
inline constexpr double kMinExpectedHits = 10.0;

VerificationReport run_verification(const ExperimentConfig& config);

// The standard verification matrix: n in {20, 50}, m in {1, 2, 5}, both map
// families, plus the 1-d median/two-point experiment on S^30.
std::vector<ExperimentConfig> standard_preset(std::uint64_t seed,
                                              std::size_t samples, int threads);

// Reduced N for quick checks; same structure.
std::vector<ExperimentConfig> smoke_preset(std::uint64_t seed, int threads);

VerificationRun run_preset(const std::string& preset, std::uint64_t seed,
                           int threads);

} // namespace conclab
