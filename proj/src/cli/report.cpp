#include "sdtest/cli/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "sdtest/error.hpp"

namespace sdtest::cli {

namespace {

constexpr std::string_view kRecordFormat = "sdtest-machine-record/1";

std::string exact(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string join(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += exact(values[i]);
    }
    return out;
}

std::string one_line(std::string s) {
    for (auto& ch : s) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    return s;
}

std::string row(std::string_view name, const std::string& value) {
    std::string line = "* ";
    line += name;
    if (line.size() < 28) line.append(28 - line.size(), ' ');
    return line + "= " + value + "\n";
}

double to_double(const std::string& text, std::string_view key) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("machine record: bad number for '" + std::string(key) + "'");
    }
    return v;
}

std::size_t to_size(const std::string& text, std::string_view key) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("machine record: bad integer for '" + std::string(key) + "'");
    }
    return v;
}

std::vector<double> to_doubles(const std::string& text, std::string_view key) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(to_double(text.substr(start, comma - start), key));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string hypothesis_line(const TestResult& r) {
    const std::string order = order_name(r.config.s);
    if (r.approach == Approach::maximality) {
        std::string names;
        for (std::size_t k = 0; k < r.labels.size(); ++k) {
            names += (k > 0 ? ", " : "") + r.labels[k];
        }
        return "* H0 : one of {" + names + "} " + order + " order SD another\n";
    }
    return "* H0 : " + r.labels.at(0) + " " + order + " order SD " + r.labels.at(1) + "\n";
}

}  // namespace

std::string order_name(int s) {
    switch (s) {
        case 1: return "first";
        case 2: return "second";
        case 3: return "third";
        default: return std::to_string(s) + "th";
    }
}

std::string format_report(const TestResult& r) {
    const auto& cfg = r.config;
    const std::string rule = "#-------------------------------------------#\n";
    std::ostringstream out;
    out << "#--- Testing for Stochastic Dominance  -----#\n\n";
    out << hypothesis_line(r);
    switch (r.approach) {
        case Approach::contact: out << "* Contact Set Approach\n"; break;
        case Approach::sr: out << "* Selective Recentering Approach\n"; break;
        case Approach::ndm: {
            const char* names[] = {"KS", "L1", "L2"};
            out << "* Numerical Delta Method\n* " << names[static_cast<int>(cfg.functional)]
                << " Type Test Statistic\n";
            break;
        }
        case Approach::maximality: out << "* Stochastic Maximality (min-max statistic)\n"; break;
        case Approach::lfc: break;
    }
    out << "\n" << rule << "\n*** Test Setting ***\n";
    out << row("Resampling method", std::string(to_string(cfg.plan.method)));
    out << row("SD order", std::to_string(cfg.s));
    for (std::size_t k = 0; k < r.sizes.size(); ++k) {
        out << row("# of (" + r.labels[k] + ")", std::to_string(r.sizes[k]));
    }
    if (cfg.plan.method == ResamplingMethod::subsampling) {
        for (std::size_t k = 0; k < r.sizes.size(); ++k) {
            out << row("# of (subsample" + std::to_string(k + 1) + ")",
                       std::to_string(cfg.plan.block_size(k)));
        }
    } else {
        out << row("# of bootstrapping", std::to_string(cfg.plan.nboot));
    }
    out << row("# of grid points", std::to_string(r.grid.size()));
    out << row("Seed", std::to_string(cfg.plan.seed));

    switch (r.approach) {
        case Approach::contact:
            out << "\n# Tuning parameter -------\n";
            out << row("c", fixed(cfg.c, 4));
            if (r.contact_threshold) out << row("c_N", fixed(*r.contact_threshold, 6));
            break;
        case Approach::sr:
            out << "\n# Tuning parameters -------\n";
            out << row("a", fixed(cfg.a, 4));
            out << row("eta", exact(cfg.eta));
            break;
        case Approach::ndm:
            out << "\n# Tuning parameter -------\n";
            if (r.epsilon) out << row("epsilon", fixed(*r.epsilon, 4));
            break;
        default: break;
    }

    out << "\n" << rule << "\n*** Test Result ***\n";
    out << row("Test statistic", fixed(r.statistic, 4));
    out << row("Significance level", fixed(cfg.alpha, 2));
    out << row("Critical-value", fixed(r.critical_value, 4));
    out << row("P-value", fixed(r.p_value, 4));
    out << row("Decision", r.reject() ? "reject H0" : "do not reject H0");
    out << row("Time elapsed", fixed(r.elapsed_seconds, 2) + " Sec");
    return out.str();
}

std::string machine_record(const TestResult& r) {
    const auto& cfg = r.config;
    const auto opt = [](const std::optional<double>& v) { return v ? exact(*v) : std::string(); };
    const auto opt_size = [](const std::optional<std::size_t>& v) {
        return v ? std::to_string(*v) : std::string();
    };
    std::ostringstream out;
    out << "format=" << kRecordFormat << "\n";
    out << "approach=" << to_string(r.approach) << "\n";
    out << "resampling=" << to_string(cfg.plan.method) << "\n";
    out << "functional=" << to_string(cfg.functional) << "\n";
    out << "s=" << cfg.s << "\n";
    out << "ngrid=" << cfg.ngrid << "\n";
    out << "alpha=" << exact(cfg.alpha) << "\n";
    out << "nboot=" << cfg.plan.nboot << "\n";
    out << "b1=" << opt_size(cfg.plan.b1) << "\n";
    out << "b2=" << opt_size(cfg.plan.b2) << "\n";
    out << "seed=" << cfg.plan.seed << "\n";
    out << "c=" << exact(cfg.c) << "\n";
    out << "a=" << exact(cfg.a) << "\n";
    out << "eta=" << exact(cfg.eta) << "\n";
    out << "epsilon_option=" << opt(cfg.epsilon) << "\n";
    out << "ndm_three_point=" << (cfg.ndm_three_point ? 1 : 0) << "\n";
    out << "weight=";
    if (cfg.weight.enabled) {
        out << exact(cfg.weight.z1) << ',' << exact(cfg.weight.z2) << ',' << exact(cfg.weight.a)
            << ',' << exact(cfg.weight.delta);
    }
    out << "\n";
    out << "prospects=" << r.labels.size() << "\n";
    for (std::size_t k = 0; k < r.labels.size(); ++k) {
        out << "label" << k + 1 << "=" << one_line(r.labels[k]) << "\n";
        out << "n" << k + 1 << "=" << r.sizes[k] << "\n";
    }
    out << "contact_threshold=" << opt(r.contact_threshold) << "\n";
    out << "recentering_threshold=" << opt(r.recentering_threshold) << "\n";
    out << "epsilon=" << opt(r.epsilon) << "\n";
    out << "test_stat=" << exact(r.statistic) << "\n";
    out << "critical_value=" << exact(r.critical_value) << "\n";
    out << "p_value=" << exact(r.p_value) << "\n";
    out << "reject=" << (r.reject() ? 1 : 0) << "\n";
    out << "grid=" << join(r.grid.points()) << "\n";
    out << "resampled_stats=" << join(r.resampled.values) << "\n";
    return out.str();
}

TestResult parse_machine_record(std::string_view text) {
    std::map<std::string, std::string, std::less<>> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("machine record: line without '='");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    const auto get = [&](std::string_view key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ParseError("machine record: missing '" + std::string(key) + "'");
        return it->second;
    };
    if (get("format") != kRecordFormat) throw ParseError("machine record: unknown format");

    TestResult r;
    auto& cfg = r.config;
    r.approach = parse_approach(get("approach"));
    cfg.approach = r.approach;
    cfg.plan.method = parse_resampling_method(get("resampling"));
    cfg.functional = parse_functional(get("functional"));
    cfg.s = static_cast<int>(to_size(get("s"), "s"));
    cfg.ngrid = to_size(get("ngrid"), "ngrid");
    cfg.alpha = to_double(get("alpha"), "alpha");
    cfg.plan.nboot = to_size(get("nboot"), "nboot");
    if (!get("b1").empty()) cfg.plan.b1 = to_size(get("b1"), "b1");
    if (!get("b2").empty()) cfg.plan.b2 = to_size(get("b2"), "b2");
    cfg.plan.seed = to_size(get("seed"), "seed");
    cfg.c = to_double(get("c"), "c");
    cfg.a = to_double(get("a"), "a");
    cfg.eta = to_double(get("eta"), "eta");
    if (!get("epsilon_option").empty()) cfg.epsilon = to_double(get("epsilon_option"), "epsilon");
    cfg.ndm_three_point = get("ndm_three_point") == "1";
    if (const auto w = to_doubles(get("weight"), "weight"); !w.empty()) {
        if (w.size() != 4) throw ParseError("machine record: weight needs 4 values");
        cfg.weight = {w[0], w[1], w[2], w[3], true};
    }
    const auto prospects = to_size(get("prospects"), "prospects");
    for (std::size_t k = 1; k <= prospects; ++k) {
        r.labels.push_back(get("label" + std::to_string(k)));
        r.sizes.push_back(to_size(get("n" + std::to_string(k)), "n"));
    }
    if (!get("contact_threshold").empty()) {
        r.contact_threshold = to_double(get("contact_threshold"), "contact_threshold");
    }
    if (!get("recentering_threshold").empty()) {
        r.recentering_threshold = to_double(get("recentering_threshold"), "recentering_threshold");
    }
    if (!get("epsilon").empty()) r.epsilon = to_double(get("epsilon"), "epsilon");
    r.statistic = to_double(get("test_stat"), "test_stat");
    r.critical_value = to_double(get("critical_value"), "critical_value");
    r.p_value = to_double(get("p_value"), "p_value");
    r.grid = Grid(to_doubles(get("grid"), "grid"));
    r.resampled = {to_doubles(get("resampled_stats"), "resampled_stats"), cfg.plan.method};
    return r;
}

std::string curves_csv(const TestResult& r) {
    if (r.curves.size() < 2 || r.difference.size() != r.grid.size()) {
        throw BadArgument("result holds no two-sample curves to export");
    }
    std::string out = "grid,F1,F2,D\n";
    for (std::size_t g = 0; g < r.grid.size(); ++g) {
        out += exact(r.grid[g]) + "," + exact(r.curves[0][g]) + "," + exact(r.curves[1][g]) +
               "," + exact(r.difference[g]) + "\n";
    }
    return out;
}

void export_curves(const TestResult& result, const std::filesystem::path& path) {
    const auto text = curves_csv(result);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string format_scan(const SubsampleScan& scan, double alpha) {
    std::ostringstream out;
    out << "#--- Subsample size scan -------------------#\n\n";
    out << "* Test statistic            = " << fixed(scan.statistic, 4) << "\n\n";
    out << "      b1      b2   critical    p-value\n";
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        const auto& row = scan.rows[i];
        char line[96];
        std::snprintf(line, sizeof line, "%8zu%8zu%11.4f%11.4f%s\n", row.b1, row.b2,
                      row.critical_value, row.p_value,
                      i == scan.min_volatility_index ? "  <- minimum volatility" : "");
        out << line;
    }
    const auto decide = [&](double crit) {
        return scan.statistic > crit ? "reject H0" : "do not reject H0";
    };
    const auto& chosen = scan.rows[scan.min_volatility_index];
    out << "\n";
    out << "* Minimum volatility        = b1 " << chosen.b1 << ", b2 " << chosen.b2
        << ", critical " << fixed(chosen.critical_value, 4) << " -> "
        << decide(chosen.critical_value) << "\n";
    out << "* Mean critical value       = " << fixed(scan.mean_critical_value, 4) << " -> "
        << decide(scan.mean_critical_value) << "\n";
    out << "* Median critical value     = " << fixed(scan.median_critical_value, 4) << " -> "
        << decide(scan.median_critical_value) << "\n";
    out << "* Significance level        = " << fixed(alpha, 2) << "\n";
    return out.str();
}

}  // namespace sdtest::cli
