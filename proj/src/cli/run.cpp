#include "sdtest/cli/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>

#include "sdtest/cli/ingest.hpp"
#include "sdtest/cli/report.hpp"
#include "sdtest/error.hpp"
#include "sdtest/procedures.hpp"

namespace sdtest::cli {

namespace {

struct Options {
    std::string input;
    std::string input2;
    std::vector<std::string> columns;
    std::string by;
    bool switch_order = false;
    bool prices = false;

    std::string resampling = "bootstrap";
    std::string approach = "lfc";
    std::string functional = "l1";
    std::vector<std::string> scan;
    std::vector<double> weight;

    std::string curves_out;
    std::string machine_out;
    bool quiet = false;
};

// "b" or "b1:b2".
std::pair<std::size_t, std::size_t> parse_block_pair(const std::string& text) {
    const auto colon = text.find(':');
    try {
        std::size_t used = 0;
        const auto b1 = std::stoul(text.substr(0, colon), &used);
        if (used != (colon == std::string::npos ? text.size() : colon)) throw std::invalid_argument("");
        if (colon == std::string::npos) return {b1, b1};
        const auto rest = text.substr(colon + 1);
        const auto b2 = std::stoul(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("");
        return {b1, b2};
    } catch (const std::logic_error&) {
        throw ConfigError("--scan-b: expected 'b' or 'b1:b2', got '" + text + "'");
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write '" + path + "'");
    file << text;
    if (!file) throw IoError("failed writing '" + path + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    TestConfig cfg;
    std::optional<std::size_t> b1;
    std::optional<std::size_t> b2;
    std::optional<double> epsilon;

    CLI::App app{"Nonparametric tests of stochastic dominance between samples"};
    app.set_help_flag("--help,-h", "Show this help and exit");
    app.add_option("--input", opt.input, "CSV file with the samples")->required();
    app.add_option("--input2", opt.input2, "Second CSV file; first column is the second sample");
    app.add_option("--columns", opt.columns, "Columns to read (value column with --by)")
        ->delimiter(',');
    app.add_option("--by", opt.by, "Group column splitting a long-format file into two samples");
    app.add_flag("--switch", opt.switch_order, "Swap the order of the samples");
    app.add_flag("--prices", opt.prices, "Treat cells as prices and test their log returns");

    app.add_option("--s", cfg.s, "Stochastic dominance order")->capture_default_str();
    app.add_option("--ngrid", cfg.ngrid, "Number of grid points")->capture_default_str();
    app.add_option("--resampling", opt.resampling,
                   "bootstrap | pooled | paired | subsampling | multiplier")
        ->capture_default_str();
    app.add_option("--approach", opt.approach, "lfc | contact | sr | ndm | maximality")
        ->capture_default_str();
    app.add_option("--functional", opt.functional, "ks | l1 | l2 (ndm only)")
        ->capture_default_str();
    app.add_option("--b1", b1, "Subsample size of the first sample");
    app.add_option("--b2", b2, "Subsample size of the second sample");
    app.add_option("--nboot", cfg.plan.nboot, "Bootstrap replications")->capture_default_str();
    app.add_option("--c", cfg.c, "Contact-set tuning constant")->capture_default_str();
    app.add_option("--a", cfg.a, "Selective-recentering tuning constant")->capture_default_str();
    app.add_option("--eta", cfg.eta, "Selective-recentering floor")->capture_default_str();
    app.add_option("--epsilon", epsilon, "Numerical-delta step size");
    app.add_flag("--ndm-three-point", cfg.ndm_three_point,
                 "Three-point second-order quotient for ndm with l2");
    app.add_option("--weight", opt.weight, "Contact-set weight q as z1,z2,a,delta")
        ->delimiter(',')
        ->expected(4);
    app.add_option("--alpha", cfg.alpha, "Significance level")->capture_default_str();
    app.add_option("--seed", cfg.plan.seed, "Random seed")->capture_default_str();
    app.add_option("--threads", cfg.plan.threads, "Worker threads (0 = all cores)");
    app.add_option("--scan-b", opt.scan,
                   "Subsampling scan over sizes, each 'b' or 'b1:b2' (comma separated)")
        ->delimiter(',');
    app.add_option("--curves-out", opt.curves_out, "Write grid,F1,F2,D to this CSV");
    app.add_option("--machine-out", opt.machine_out, "Write the key=value result record here");
    app.add_flag("--quiet", opt.quiet, "Do not print the report");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        cfg.plan.method = parse_resampling_method(opt.resampling);
        cfg.approach = parse_approach(opt.approach);
        cfg.functional = parse_functional(opt.functional);
        cfg.epsilon = epsilon;
        if (!opt.weight.empty()) {
            cfg.weight = {opt.weight[0], opt.weight[1], opt.weight[2], opt.weight[3], true};
        }
        const bool subsampling = cfg.plan.method == ResamplingMethod::subsampling;
        if (opt.scan.empty()) {
            if (subsampling && !b1) throw ConfigError("--resampling subsampling requires --b1");
            if (!subsampling && (b1 || b2)) {
                throw ConfigError("--b1/--b2 apply only to --resampling subsampling");
            }
        } else if (b1 || b2) {
            throw ConfigError("--scan-b replaces --b1/--b2");
        }
        cfg.plan.b1 = b1;
        cfg.plan.b2 = b2;
        cfg.validate();

        InputSpec spec;
        spec.paths.emplace_back(opt.input);
        if (!opt.input2.empty()) spec.paths.emplace_back(opt.input2);
        spec.columns = opt.columns;
        if (!opt.by.empty()) spec.by = opt.by;
        spec.switch_order = opt.switch_order;
        spec.returns_from_prices = opt.prices;
        const auto data = ingest(spec);
        if (data.dropped > 0) {
            err << "note: dropped " << data.dropped << " blank or NaN cell"
                << (data.dropped == 1 ? "" : "s") << "\n";
        }

        if (!opt.scan.empty()) {
            if (data.samples.size() != 2) throw ConfigError("--scan-b compares exactly two samples");
            std::vector<std::pair<std::size_t, std::size_t>> candidates;
            for (const auto& item : opt.scan) candidates.push_back(parse_block_pair(item));
            const auto scan =
                scan_subsample_size(data.samples[0], data.samples[1], cfg, candidates);
            if (!opt.quiet) out << format_scan(scan, cfg.alpha);
            return kExitOk;
        }

        const auto result = run_test(data.samples, cfg);
        if (!opt.quiet) out << format_report(result);
        if (!opt.machine_out.empty()) write_text(opt.machine_out, machine_record(result));
        if (!opt.curves_out.empty()) export_curves(result, opt.curves_out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const MissingSubsampleSize& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace sdtest::cli
