// zgof command line: power studies, single-sample test reports, zig-zag
// classification, beta-binomial generation, the exact enumeration oracle,
// and catalog dumps.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zgof/config.hpp"
#include "zgof/error.hpp"
#include "zgof/oracle.hpp"
#include "zgof/power.hpp"
#include "zgof/report.hpp"

namespace {

using namespace zgof;

// exit codes: 0 success, 1 negative zig-zag classification, 2 invalid
// input, 3 partial grid failure, 4 I/O failure
constexpr int kExitNotZigzag = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitPartialFailure = 3;
constexpr int kExitIo = 4;

int exit_code_for(const Error& e) {
    return e.code() == Errc::io_failure ? kExitIo : kExitInvalid;
}

std::vector<double> parse_reals(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            raise(Errc::invalid_parameter,
                  std::string("cannot parse '") + item + "' in " + what);
        }
    }
    if (out.empty()) {
        raise(Errc::invalid_parameter, std::string(what) + " is empty");
    }
    return out;
}

std::vector<std::int64_t> parse_ints(const std::string& text, const char* what) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            raise(Errc::invalid_parameter,
                  std::string("cannot parse '") + item + "' in " + what);
        }
    }
    if (out.empty()) {
        raise(Errc::invalid_parameter, std::string(what) + " is empty");
    }
    return out;
}

// A distribution argument is a catalog name, or a comma-separated
// probability vector, optionally prefixed "label=".
DistributionRef parse_distribution_arg(const std::string& text, const char* what,
                                       const std::string& default_label) {
    const auto eq = text.find('=');
    if (eq != std::string::npos) {
        return DistributionRef::explicit_vector(
            text.substr(0, eq), parse_reals(text.substr(eq + 1), what));
    }
    if (text.find(',') != std::string::npos) {
        return DistributionRef::explicit_vector(default_label,
                                                parse_reals(text, what));
    }
    return DistributionRef::named(text);
}

struct PowerArgs {
    std::string config_path;
    std::optional<std::int64_t> replicates;
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    std::string sample_sizes;
    std::string statistics;
    std::string null_arg;
    std::vector<std::string> alternatives;
    std::string out_dir;
    std::string formats;
    int threads = 1;
};

int run_power(const PowerArgs& args) {
    std::string source;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path, std::ios::binary);
        if (!in) {
            raise(Errc::io_failure, "cannot read config '" + args.config_path + "'");
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        source = buffer.str();
    }
    StudyConfig config = parse_config(source);

    if (args.replicates) config.plan.replicates = *args.replicates;
    if (args.alpha) config.plan.alpha = *args.alpha;
    if (args.seed) config.plan.seed = *args.seed;
    if (!args.sample_sizes.empty()) {
        config.plan.sample_sizes = parse_ints(args.sample_sizes, "--sample-sizes");
    }
    if (!args.statistics.empty()) {
        config.plan.statistics.clear();
        std::stringstream ss(args.statistics);
        std::string token;
        while (std::getline(ss, token, ',')) {
            config.plan.statistics.push_back(statistic_from_token(token));
        }
    }
    if (!args.null_arg.empty()) {
        config.null_dist = parse_distribution_arg(args.null_arg, "--null", "custom-null");
    }
    if (!args.alternatives.empty()) {
        config.alternatives.clear();
        for (std::size_t i = 0; i < args.alternatives.size(); ++i) {
            config.alternatives.push_back(parse_distribution_arg(
                args.alternatives[i], "--alternatives", "alt" + std::to_string(i + 1)));
        }
    }
    if (!args.out_dir.empty()) config.output_dir = args.out_dir;
    if (!args.formats.empty()) {
        config.formats.clear();
        std::stringstream ss(args.formats);
        std::string token;
        while (std::getline(ss, token, ',')) config.formats.push_back(token);
    }

    // Re-validate the merged configuration through the canonical path.
    config = parse_config(canonical_config(config));

    const StudyResult result = run_study(config.plan, config.resolved_null(),
                                         config.resolved_alternatives(), args.threads);
    const auto written =
        write_study_outputs(result, config.output_dir, config.formats);
    for (const auto& path : written) {
        std::cout << "wrote " << path.string() << '\n';
    }
    if (!result.all_ok()) {
        for (const StudyCell& cell : result.cells) {
            if (!cell.ok()) {
                std::cerr << "failed cell (" << cell.alternative << ", "
                          << to_token(cell.statistic) << ", n=" << cell.sample_size
                          << "): " << cell.error << '\n';
            }
        }
        return kExitPartialFailure;
    }
    return 0;
}

int run_stat(const std::string& counts_arg, const std::string& null_arg,
             std::int64_t replicates, std::uint64_t seed) {
    const ObservedCounts obs(parse_ints(counts_arg, "--counts"));
    const CellProbabilities null_cells =
        resolve(parse_distribution_arg(null_arg, "--null", "custom-null"));

    std::cout << "statistic,value,p_value\n";
    for (StatisticKind kind : kAllStatistics) {
        const double value = compute(kind, obs, null_cells);
        const StreamFamily streams{seed, kRoleNullSets, statistic_id(kind),
                                   static_cast<std::uint64_t>(obs.total())};
        const EmpiricalDistribution null_dist = simulate_distribution(
            kind, null_cells, null_cells, obs.total(), replicates, streams);
        const double p_value = tail_probability(null_dist, value);
        std::cout << to_token(kind) << ',' << format_full(value) << ','
                  << format_real(p_value) << '\n';
    }
    return 0;
}

int run_zigzag(const std::string& probs_arg) {
    const CellProbabilities cells(parse_reals(probs_arg, "--probs"));
    const ZigzagReport report = classify_zigzag(cells);
    std::cout << "is_zigzag,pattern,first_violation\n";
    std::cout << (report.is_zigzag ? "true" : "false") << ','
              << to_token(report.pattern) << ',';
    if (report.first_violation) std::cout << *report.first_violation;
    std::cout << '\n';
    return report.is_zigzag ? 0 : kExitNotZigzag;
}

int run_betabinomial(double a, double b, std::int64_t k) {
    const CellProbabilities cells = beta_binomial(a, b, k);
    std::cout << "cell,probability,rounded\n";
    for (std::size_t i = 0; i < cells.k(); ++i) {
        char rounded[16];
        std::snprintf(rounded, sizeof rounded, "%.2f", cells[i]);
        std::cout << (i + 1) << ',' << format_full(cells[i]) << ',' << rounded << '\n';
    }
    return 0;
}

int run_oracle(const std::string& kind_arg, const std::string& null_arg,
               const std::string& alt_arg, std::int64_t n, double alpha,
               std::int64_t max_outcomes, std::int64_t mc_replicates,
               std::uint64_t seed) {
    const StatisticKind kind = statistic_from_token(kind_arg);
    const CellProbabilities null_cells =
        resolve(parse_distribution_arg(null_arg, "--null", "oracle-null"));
    const CellProbabilities alt_cells =
        resolve(parse_distribution_arg(alt_arg, "--alt", "oracle-alt"));
    OracleOptions options;
    if (max_outcomes > 0) options.max_outcomes = max_outcomes;
    const PowerEstimate exact =
        exact_power_oracle(kind, null_cells, alt_cells, n, alpha, options);

    std::cout << "exact_power,sensitivity,x1,alpha1,x2,alpha2,exact_hit";
    if (mc_replicates > 0) std::cout << ",mc_power,mc_se";
    std::cout << '\n';
    std::cout << format_full(exact.power) << ',' << format_full(exact.sensitivity)
              << ',' << format_full(exact.bracket.x1) << ','
              << format_full(exact.bracket.alpha1) << ','
              << format_full(exact.bracket.x2) << ','
              << format_full(exact.bracket.alpha2) << ','
              << (exact.bracket.exact_hit ? "true" : "false");
    if (mc_replicates > 0) {
        const StreamFamily null_streams{seed, kRoleNullSets, statistic_id(kind),
                                        static_cast<std::uint64_t>(n)};
        const StreamFamily alt_streams{seed, kRoleAlternativeSets,
                                       fnv1a64(alt_cells.label()),
                                       static_cast<std::uint64_t>(n)};
        const EmpiricalDistribution null_dist = simulate_distribution(
            kind, null_cells, null_cells, n, mc_replicates, null_streams);
        const EmpiricalDistribution alt_dist = simulate_distribution(
            kind, alt_cells, null_cells, n, mc_replicates, alt_streams);
        const PowerEstimate mc = interpolated_power(
            bracket_critical_values(null_dist, alpha), alpha, alt_dist);
        const double se = std::sqrt(mc.power * (1.0 - mc.power) /
                                    static_cast<double>(mc_replicates));
        std::cout << ',' << format_real(mc.power) << ',' << format_real(se);
    }
    std::cout << '\n';
    return 0;
}

int run_catalog(const std::string& dump_path) {
    if (dump_path.empty()) {
        write_catalog_csv(std::cout);
        return 0;
    }
    std::ofstream os(dump_path, std::ios::binary);
    if (!os) {
        raise(Errc::io_failure, "cannot open '" + dump_path + "' for writing");
    }
    write_catalog_csv(os);
    os.flush();
    if (!os) {
        raise(Errc::io_failure, "failed while writing '" + dump_path + "'");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete goodness-of-fit statistics and Monte Carlo power studies"};
    app.require_subcommand(1);

    PowerArgs power_args;
    auto* power_cmd = app.add_subcommand(
        "power", "run a power study and write study/curve/sensitivity files");
    power_cmd->add_option("--config", power_args.config_path,
                          "JSON study config (defaults used when omitted)");
    std::int64_t power_replicates = -1;
    double power_alpha = -1.0;
    std::uint64_t power_seed = 0;
    auto* rep_opt = power_cmd->add_option("--replicates", power_replicates,
                                          "replicates per empirical distribution");
    auto* alpha_opt =
        power_cmd->add_option("--alpha", power_alpha, "target significance level");
    auto* seed_opt = power_cmd->add_option("--seed", power_seed, "reproducibility seed");
    power_cmd->add_option("--sample-sizes", power_args.sample_sizes,
                          "comma-separated sample sizes");
    power_cmd->add_option("--statistics", power_args.statistics,
                          "comma-separated statistic tokens");
    power_cmd->add_option("--null", power_args.null_arg,
                          "null: catalog name or comma-separated probabilities");
    power_cmd->add_option("--alternatives", power_args.alternatives,
                          "alternative (catalog name or label=p1,p2,...); repeatable");
    power_cmd->add_option("--out", power_args.out_dir, "output directory")
        ->envname("ZGOF_OUT");
    power_cmd->add_option("--formats", power_args.formats,
                          "comma-separated output formats (csv,json)");
    power_cmd->add_option("--threads", power_args.threads,
                          "worker threads (results are identical at any width)");

    std::string stat_counts;
    std::string stat_null;
    std::int64_t stat_replicates = 10'000;
    std::uint64_t stat_seed = 1;
    auto* stat_cmd = app.add_subcommand(
        "stat", "compute all six statistics for one sample, with Monte Carlo p-values");
    stat_cmd->add_option("--counts", stat_counts, "comma-separated observed counts")
        ->required();
    stat_cmd->add_option("--null", stat_null,
                         "null: catalog name or comma-separated probabilities")
        ->required();
    stat_cmd->add_option("--replicates", stat_replicates, "null replicates for p-values");
    stat_cmd->add_option("--seed", stat_seed, "reproducibility seed");

    std::string zigzag_probs;
    auto* zigzag_cmd =
        app.add_subcommand("zigzag", "classify a probability vector (exit 0 iff zig-zag)");
    zigzag_cmd->add_option("--probs", zigzag_probs, "comma-separated probabilities")
        ->required();

    double bb_a = 0.0;
    double bb_b = 0.0;
    std::int64_t bb_k = 0;
    auto* bb_cmd =
        app.add_subcommand("betabinomial", "print beta-binomial cell probabilities");
    bb_cmd->add_option("--a", bb_a, "first shape parameter")->required();
    bb_cmd->add_option("--b", bb_b, "second shape parameter")->required();
    bb_cmd->add_option("--k", bb_k, "number of cells")->required();

    std::string oracle_kind;
    std::string oracle_null;
    std::string oracle_alt;
    std::int64_t oracle_n = 0;
    double oracle_alpha = 0.0;
    std::int64_t oracle_cap = 0;
    std::int64_t oracle_mc = 0;
    std::uint64_t oracle_seed = 1;
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "exact interpolated power by exhaustive enumeration");
    oracle_cmd->add_option("--kind", oracle_kind, "statistic token")->required();
    oracle_cmd->add_option("--null", oracle_null, "null distribution")->required();
    oracle_cmd->add_option("--alt", oracle_alt, "alternative distribution")->required();
    oracle_cmd->add_option("--n", oracle_n, "sample size")->required();
    oracle_cmd->add_option("--alpha", oracle_alpha, "target significance level")
        ->required();
    oracle_cmd->add_option("--max-outcomes", oracle_cap,
                           "outcome-space cap (default 2000000)");
    oracle_cmd->add_option("--mc-replicates", oracle_mc,
                           "also print a Monte Carlo estimate using this many replicates");
    oracle_cmd->add_option("--seed", oracle_seed, "seed for the Monte Carlo estimate");

    std::string catalog_dump;
    auto* catalog_cmd =
        app.add_subcommand("catalog", "dump the distribution catalog as CSV");
    catalog_cmd->add_option("--dump", catalog_dump, "write to this path instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*power_cmd) {
            if (*rep_opt) power_args.replicates = power_replicates;
            if (*alpha_opt) power_args.alpha = power_alpha;
            if (*seed_opt) power_args.seed = power_seed;
            return run_power(power_args);
        }
        if (*stat_cmd) return run_stat(stat_counts, stat_null, stat_replicates, stat_seed);
        if (*zigzag_cmd) return run_zigzag(zigzag_probs);
        if (*bb_cmd) return run_betabinomial(bb_a, bb_b, bb_k);
        if (*oracle_cmd) {
            return run_oracle(oracle_kind, oracle_null, oracle_alt, oracle_n,
                              oracle_alpha, oracle_cap, oracle_mc, oracle_seed);
        }
        if (*catalog_cmd) return run_catalog(catalog_dump);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}
