#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "conclab/report_io.hpp"
#include "conclab/rng.hpp"
#include "conclab/sphere_exact.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnsupportedExponent = 3;
constexpr int kExitIo = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CONCLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            // fall through to the fixed default
        }
    }
    return 42;
}

bool write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

std::string csv_cell(const std::optional<double>& v) {
    return v ? conclab::format_double(*v) : std::string();
}

struct BoundsArgs {
    double p = 1.0;
    double rate = 1.0;
    double amplitude = 1.0;
    int m = 0;
    std::string grid;
    std::optional<double> lambda1;
    std::optional<double> ledoux_constant;
    bool lemma23 = false;
    bool show_constants = false;
    int cor41_n = 0;
    std::string out_path;
};

int run_bounds(const BoundsArgs& args) {
    const conclab::ConcentrationProfile profile(args.amplitude, args.rate, args.p);

    if (args.show_constants) {
        const conclab::ConstantFamily f = conclab::constants(args.m, profile);
        std::string table = "constant,value,log_value\n";
        auto row = [&table](const char* name, double log_v) {
            table += name;
            table += ',';
            table += conclab::format_double(std::exp(log_v));
            table += ',';
            table += conclab::format_double(log_v);
            table += '\n';
        };
        row("A", f.log_a);
        row("A_tilde", f.log_a_tilde);
        row("B", f.log_b);
        row("B_tilde", f.log_b_tilde);
        row("B_chained", f.log_b_chained);
        std::cout << table;
        if (!args.out_path.empty() && !write_text_file(args.out_path, table)) {
            std::cerr << "cannot write " << args.out_path << "\n";
            return kExitIo;
        }
        return kExitOk;
    }

    const std::vector<double> grid = conclab::parse_grid(args.grid);
    std::string header = conclab::csv_header();
    header.pop_back(); // reopen the line for optional extra columns
    if (args.lemma23) header += ",bound_lemma23";
    if (args.ledoux_constant) header += ",bound_ledoux";
    header += '\n';

    std::string table = header;
    for (double r : grid) {
        const double thm = conclab::thm_main_tail(profile, args.m, r).value();
        std::optional<double> gromov;
        if (args.lambda1)
            gromov = conclab::gromov_bound(*args.lambda1, args.m, r).value();
        std::optional<double> cor41;
        if (args.cor41_n > 0)
            cor41 = conclab::cor41_bound_at(args.cor41_n, args.m, r).value();
        table += conclab::format_double(r) + ",,," + conclab::format_double(thm) +
                 ',' + csv_cell(gromov) + ',' + csv_cell(cor41) + ',';
        if (args.lemma23)
            table += ',' + conclab::format_double(
                               conclab::lemma23_bound(profile, r).value());
        if (args.ledoux_constant)
            table += ',' + conclab::format_double(
                               conclab::ledoux_oleszkiewicz_form(
                                   profile, args.m, r, *args.ledoux_constant)
                                   .value());
        table += '\n';
    }
    std::cout << table;
    if (!args.out_path.empty() && !write_text_file(args.out_path, table)) {
        std::cerr << "cannot write " << args.out_path << "\n";
        return kExitIo;
    }
    return kExitOk;
}

struct SphereArgs {
    int n = 0;
    int m = 0;
    std::string grid;
    double lambda = 0.0;
    double c = 1.0;
    double c_prime = 1.0;
    bool alpha = false;
    bool artstein_u = false;
    bool artstein_asymptotic = false;
    bool artstein_bracket = false;
    std::string out_path;
};

int run_sphere(const SphereArgs& args) {
    std::string output;
    if (args.artstein_u) {
        const std::vector<double> grid = conclab::parse_grid(args.grid);
        output = conclab::format_double(conclab::artstein_u(grid.at(0), args.lambda)) + "\n";
    } else if (args.artstein_asymptotic) {
        const std::vector<double> grid = conclab::parse_grid(args.grid);
        output = conclab::format_double(
                     conclab::artstein_asymptotic(args.n, args.lambda, grid.at(0))) +
                 "\n";
    } else if (args.artstein_bracket) {
        const std::vector<double> grid = conclab::parse_grid(args.grid);
        const conclab::ArtsteinBracket b =
            conclab::artstein_bracket(args.n, args.m, grid.at(0), args.c, args.c_prime);
        output = "lower,upper\n" + conclab::format_double(b.lower) + ',' +
                 conclab::format_double(b.upper) + "\n";
    } else {
        const std::vector<double> grid = conclab::parse_grid(args.grid);
        const bool tube = !args.alpha;
        if (grid.size() == 1) {
            const double r = grid[0];
            const double v = tube ? conclab::tube_complement_exact(
                                        conclab::TubeQuery(args.n, args.m, r))
                                  : conclab::alpha_sphere_exact(args.n, r);
            output = conclab::format_double(v) + "\n";
        } else {
            output = conclab::csv_header();
            for (double r : grid) {
                const double v = tube ? conclab::tube_complement_exact(
                                            conclab::TubeQuery(args.n, args.m, r))
                                      : conclab::alpha_sphere_exact(args.n, r);
                std::optional<double> bound;
                if (tube) bound = conclab::cor41_bound_at(args.n, args.m, r).value();
                const std::string margin =
                    bound ? conclab::format_double(*bound - v) : std::string();
                output += conclab::format_double(r) + ",," +
                          conclab::format_double(v) + ",,," + csv_cell(bound) + ',' +
                          margin + '\n';
            }
        }
    }
    std::cout << output;
    if (!args.out_path.empty() && !write_text_file(args.out_path, output)) {
        std::cerr << "cannot write " << args.out_path << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int emit_run(const conclab::VerificationRun& run, const std::string& out_path,
             const std::string& format, bool with_timestamp) {
    const conclab::ordered_json j = conclab::to_json(run, with_timestamp);
    const std::string table = conclab::summary_table(j);
    std::cout << table;
    if (!out_path.empty()) {
        const std::string payload = format == "csv" ? table : j.dump(2) + "\n";
        if (!write_text_file(out_path, payload)) {
            std::cerr << "cannot write " << out_path << "\n";
            return kExitIo;
        }
    }
    return run.violations_total == 0 ? kExitOk : kExitViolations;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"concentration-of-measure laboratory"};
    app.require_subcommand(1);

    BoundsArgs bounds_args;
    CLI::App* bounds = app.add_subcommand("bounds", "evaluate closed-form tail bounds");
    bounds->add_option("--p", bounds_args.p, "profile exponent p");
    bounds->add_option("--cx", bounds_args.rate, "profile rate c_X");
    bounds->add_option("--CX", bounds_args.amplitude, "profile amplitude C_X");
    bounds->add_option("--m", bounds_args.m, "target dimension")->required();
    bounds->add_option("--r", bounds_args.grid, "radius grid start:stop:step");
    bounds->add_option("--lambda1", bounds_args.lambda1, "spectral gap for the Gromov column");
    bounds->add_option("--ledoux-constant", bounds_args.ledoux_constant,
                       "universal constant for the Ledoux-Oleszkiewicz column (no default)");
    bounds->add_flag("--lemma23", bounds_args.lemma23, "append the deviation-bound column");
    bounds->add_flag("--constants", bounds_args.show_constants,
                     "print the constant family instead of a radius table");
    bounds->add_option("--tube-n", bounds_args.cor41_n,
                       "ambient sphere dimension for the tube-bound column");
    bounds->add_option("--out", bounds_args.out_path, "also write the table to a file");

    SphereArgs sphere_args;
    CLI::App* sphere = app.add_subcommand("sphere", "exact spherical measures");
    sphere->add_option("--n", sphere_args.n, "sphere dimension");
    sphere->add_option("--m", sphere_args.m, "tube codimension");
    sphere->add_option("--r", sphere_args.grid, "radius or radius grid")->required();
    sphere->add_option("--lambda", sphere_args.lambda, "subsphere dimension fraction");
    sphere->add_option("--c", sphere_args.c, "bracket constant c");
    sphere->add_option("--cprime", sphere_args.c_prime, "bracket constant c'");
    sphere->add_flag("--alpha", sphere_args.alpha, "concentration function instead of tube measure");
    sphere->add_flag("--artstein-u", sphere_args.artstein_u, "rate function u(r, lambda)");
    sphere->add_flag("--artstein-asymptotic", sphere_args.artstein_asymptotic,
                     "large-n tube asymptotic");
    sphere->add_flag("--artstein-bracket", sphere_args.artstein_bracket,
                     "finite-n tube bracket");
    sphere->add_option("--out", sphere_args.out_path, "also write the output to a file");

    int sim_n = 10;
    int sim_m = 1;
    std::string sim_map = "proj";
    std::size_t sim_count = 100000;
    std::optional<std::uint64_t> sim_seed;
    std::string sim_grid;
    std::vector<double> sim_q;
    double sim_scale = conclab::default_embed_scale();
    int sim_coordinate = 0;
    int sim_threads = 1;
    std::string sim_out;
    std::string sim_format = "json";
    bool sim_no_timestamp = false;
    CLI::App* simulate = app.add_subcommand("simulate", "run one seeded experiment");
    simulate->add_option("--n", sim_n, "sphere dimension")->required();
    simulate->add_option("--m", sim_m, "target dimension");
    simulate->add_option("--map", sim_map, "proj | hyp | coord")
        ->check(CLI::IsMember({"proj", "hyp", "coord"}));
    simulate->add_option("--N", sim_count, "sample count");
    simulate->add_option("--seed", sim_seed, "RNG seed (default: CONCLAB_SEED or 42)");
    simulate->add_option("--r", sim_grid, "radius grid start:stop:step");
    simulate->add_option("--q", sim_q, "moment orders");
    simulate->add_option("--scale", sim_scale, "hyperbolic embedding scale");
    simulate->add_option("--coordinate", sim_coordinate, "coordinate index for coord maps");
    simulate->add_option("--threads", sim_threads, "worker threads")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--out", sim_out, "report file");
    simulate->add_option("--format", sim_format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    simulate->add_flag("--no-timestamp", sim_no_timestamp, "omit the timestamp field");

    std::string verify_preset = "standard";
    std::optional<std::uint64_t> verify_seed;
    int verify_threads = 1;
    std::string verify_out;
    bool verify_no_timestamp = false;
    CLI::App* verify = app.add_subcommand("verify", "run a verification preset");
    verify->add_option("--preset", verify_preset, "standard | smoke")
        ->check(CLI::IsMember({"standard", "smoke"}));
    verify->add_option("--seed", verify_seed, "RNG seed (default: CONCLAB_SEED or 42)");
    verify->add_option("--threads", verify_threads, "worker threads")
        ->check(CLI::PositiveNumber);
    verify->add_option("--out", verify_out, "report file (JSON)");
    verify->add_flag("--no-timestamp", verify_no_timestamp, "omit the timestamp field");

    std::string inspect_path;
    CLI::App* inspect = app.add_subcommand("inspect", "summarize a written report");
    inspect->add_option("report", inspect_path, "report JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (bounds->parsed()) {
            if (!bounds_args.show_constants && bounds_args.grid.empty()) {
                std::cerr << "bounds: --r is required unless --constants is given\n";
                return kExitUsage;
            }
            return run_bounds(bounds_args);
        }
        if (sphere->parsed()) return run_sphere(sphere_args);
        if (simulate->parsed()) {
            conclab::ExperimentConfig config;
            config.sphere_dim = sim_n;
            if (sim_map == "proj")
                config.map = conclab::LipschitzMap::projection(sim_n, sim_m);
            else if (sim_map == "hyp")
                config.map = conclab::LipschitzMap::hyperbolic_projection(sim_n, sim_m,
                                                                          sim_scale);
            else
                config.map = conclab::LipschitzMap::coordinate_map(sim_n, sim_coordinate);
            config.name = "S" + std::to_string(sim_n) + "_" + config.map.name();
            config.samples = sim_count;
            config.seed = sim_seed.value_or(default_seed());
            if (!sim_grid.empty()) config.r_grid = conclab::parse_grid(sim_grid);
            config.q_list = sim_q;
            config.threads = sim_threads;
            config.lemma_tails = config.map.ambient_target_dim() == 1;

            conclab::VerificationRun run;
            run.seed = config.seed;
            run.threads = sim_threads;
            run.rng_algorithm = conclab::CounterRng::algorithm_id;
            run.preset = "custom";
            run.experiments.push_back(conclab::run_verification(config));
            run.violations_total = run.experiments.back().violations.size();
            return emit_run(run, sim_out, sim_format, !sim_no_timestamp);
        }
        if (verify->parsed()) {
            const conclab::VerificationRun run = conclab::run_preset(
                verify_preset, verify_seed.value_or(default_seed()), verify_threads);
            return emit_run(run, verify_out, "json", !verify_no_timestamp);
        }
        if (inspect->parsed()) {
            std::ifstream in(inspect_path, std::ios::binary);
            if (!in) {
                std::cerr << "cannot read " << inspect_path << "\n";
                return kExitIo;
            }
            conclab::ordered_json j;
            try {
                in >> j;
                std::cout << conclab::summary_table(j);
            } catch (const std::exception& e) {
                std::cerr << "cannot parse " << inspect_path << ": " << e.what() << "\n";
                return kExitIo;
            }
            return kExitOk;
        }
    } catch (const conclab::unsupported_exponent_error& e) {
        std::cerr << e.what() << "\n";
        return kExitUnsupportedExponent;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
