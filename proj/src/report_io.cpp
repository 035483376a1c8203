#include "conclab/report_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace conclab {

std::vector<double> parse_grid(const std::string& spec) {
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) {
        std::size_t used = 0;
        const double v = std::stod(spec, &used);
        if (used != spec.size()) throw std::invalid_argument("grid: trailing characters");
        return {v};
    }
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw std::invalid_argument("grid: expected start:stop:step");
    const double start = std::stod(spec.substr(0, c1));
    const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (!(step > 0.0)) throw std::invalid_argument("grid: step must be positive");
    if (stop < start) throw std::invalid_argument("grid: stop must be >= start");
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double v = start + k * step;
        if (v > stop + 0.5 * step) break;
        out.push_back(v);
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

ordered_json json_opt(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

ordered_json map_to_json(const LipschitzMap& map) {
    ordered_json j;
    j["name"] = map.name();
    j["source_dim"] = map.source_dim;
    j["target_dim"] = map.target_dim;
    j["target_space"] =
        map.target_space() == TargetSpace::Hyperbolic ? "hyperbolic" : "euclidean";
    if (map.kind == MapKind::HyperbolicProjection) j["scale"] = map.scale;
    if (map.kind == MapKind::Coordinate) j["coordinate"] = map.coordinate;
    j["declared_lipschitz"] = map.declared_lipschitz;
    return j;
}

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void append_csv_rows(const ordered_json& report, std::string& out) {
    for (const auto& row : report.at("tail_rows")) {
        auto field = [&](const char* key) -> std::string {
            const auto& v = row.at(key);
            return v.is_null() ? std::string() : format_double(v.get<double>());
        };
        out += field("r");
        out += ',';
        out += field("empirical");
        out += ',';
        out += field("exact");
        out += ',';
        out += field("bound_thm_main");
        out += ',';
        out += field("bound_gromov");
        out += ',';
        out += field("bound_cor41");
        out += ',';
        out += field("margin");
        out += '\n';
    }
}

} // namespace

ordered_json to_json(const VerificationReport& report) {
    ordered_json j;
    j["name"] = report.config.name;
    j["sphere_dim"] = report.config.sphere_dim;
    j["map"] = map_to_json(report.config.map);
    j["samples"] = report.config.samples;
    j["seed"] = report.config.seed;
    j["expectation"] = {
        {"point", report.expectation.point},
        {"residual", report.expectation.residual},
        {"iterations", report.expectation.iterations},
        {"converged", report.expectation.converged},
    };
    j["tail_identity_exact"] = report.tail_identity_exact;
    j["mean_f0_norm"] = report.mean_f0_norm;
    j["v2"] = report.v2;
    j["crossover_r"] = json_opt(report.crossover_r);

    auto& rows = j["tail_rows"] = ordered_json::array();
    for (const auto& row : report.tail_rows) {
        rows.push_back({
            {"r", row.r},
            {"empirical", row.empirical},
            {"exact", json_opt(row.exact)},
            {"bound_thm_main", json_opt(row.bound_thm_main)},
            {"bound_gromov", json_opt(row.bound_gromov)},
            {"bound_cor41", json_opt(row.bound_cor41)},
            {"margin", row.margin},
            {"slack", row.slack},
        });
    }
    auto& moments = j["moment_rows"] = ordered_json::array();
    for (const auto& row : report.moment_rows) {
        moments.push_back({
            {"q", row.q},
            {"v_q", row.v_q},
            {"v_tilde_q", row.v_tilde_q},
            {"bound_first_qth", row.bound_first_qth},
            {"bound_second_qth", row.bound_second_qth},
        });
    }
    auto& lemmas = j["lemma_rows"] = ordered_json::array();
    for (const auto& row : report.lemma_rows) {
        lemmas.push_back({
            {"r", row.r},
            {"median_dev_empirical", row.median_dev_empirical},
            {"median_dev_bound", row.median_dev_bound},
            {"two_point_empirical", row.two_point_empirical},
            {"two_point_bound", row.two_point_bound},
        });
    }
    auto& viols = j["violations"] = ordered_json::array();
    for (const auto& v : report.violations) {
        viols.push_back({
            {"context", v.context},
            {"at", v.at},
            {"lhs", v.lhs},
            {"rhs", v.rhs},
            {"slack", v.slack},
        });
    }
    return j;
}

ordered_json to_json(const VerificationRun& run, bool with_timestamp) {
    ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "conclab_report";
    j["preset"] = run.preset;
    j["seed"] = run.seed;
    j["threads"] = run.threads;
    j["rng_algorithm"] = run.rng_algorithm;
    if (with_timestamp) j["timestamp"] = timestamp_now();
    j["violations_total"] = run.violations_total;
    auto& experiments = j["experiments"] = ordered_json::array();
    for (const auto& e : run.experiments) experiments.push_back(to_json(e));
    return j;
}

std::string csv_header() {
    return "r,empirical,exact,bound_thm_main,bound_gromov,bound_cor41,margin\n";
}

std::string summary_table(const ordered_json& run_or_report) {
    std::string out = csv_header();
    if (run_or_report.contains("experiments")) {
        for (const auto& e : run_or_report.at("experiments")) append_csv_rows(e, out);
    } else {
        append_csv_rows(run_or_report, out);
    }
    return out;
}

} // namespace conclab
