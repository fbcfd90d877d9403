#include "sdtest/procedures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sdtest/error.hpp"

namespace sdtest {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct TwoSampleSetup {
    std::vector<Sample> samples;
    Grid grid;
    std::vector<CurveValues> curves;
    CurveValues difference;
    ScaleFactor scale;
};

std::string label_or(const Sample& sample, std::size_t k) {
    return sample.label().empty() ? "sample" + std::to_string(k + 1) : sample.label();
}

TwoSampleSetup prepare(const Sample& sample1, const Sample& sample2, const TestConfig& config) {
    config.validate();
    TwoSampleSetup setup;
    setup.samples = {sample1, sample2};
    setup.grid = set_grid(setup.samples, config.ngrid);
    setup.curves = {integrated_ecdf(sample1, setup.grid, config.s),
                    integrated_ecdf(sample2, setup.grid, config.s)};
    setup.difference = setup.curves[0];
    for (std::size_t g = 0; g < setup.grid.size(); ++g) {
        setup.difference.values[g] -= setup.curves[1].values[g];
    }
    setup.scale = ScaleFactor::two_sample(sample1.size(), sample2.size());
    return setup;
}

void require_bootstrap_family(const TestConfig& config, std::string_view procedure) {
    if (config.plan.method == ResamplingMethod::subsampling) {
        throw ConfigError(std::string(procedure) +
                          " requires a bootstrap-family resampling method, not subsampling");
    }
}

TestResult finish(TwoSampleSetup&& setup, const TestConfig& config, Approach approach,
                  double statistic, ResampledDistribution&& resampled, Clock::time_point start) {
    TestResult result;
    result.approach = approach;
    result.statistic = statistic;
    result.critical_value = quantile(resampled.values, 1.0 - config.alpha);
    result.p_value = p_value(resampled, statistic);
    result.resampled = std::move(resampled);
    result.grid = std::move(setup.grid);
    result.curves = std::move(setup.curves);
    result.difference = std::move(setup.difference);
    for (std::size_t k = 0; k < setup.samples.size(); ++k) {
        result.labels.push_back(label_or(setup.samples[k], k));
        result.sizes.push_back(setup.samples[k].size());
    }
    result.config = config;
    result.config.approach = approach;
    result.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

/// Simulated two-sample process nu*(x) = lambda (C_1(x) - C_2(x)) for one replicate.
void pair_process(const ProcessWorkspace& ws, double lambda, std::span<double> out) {
    for (std::size_t g = 0; g < out.size(); ++g) {
        out[g] = lambda * (ws.curves[0][g] - ws.curves[1][g]);
    }
}

double positive_sup(std::span<const double> d) {
    double best = 0.0;
    for (const double v : d) best = std::max(best, v);
    return best;
}

double ndm_functional(Functional functional, std::span<const double> d, double spacing) {
    switch (functional) {
        case Functional::ks: return positive_sup(d);
        case Functional::l1: return l1_statistic(d, spacing, 1.0);
        case Functional::l2: {
            double sum = 0.0;
            for (const double v : d) {
                const double p = std::max(v, 0.0);
                sum += p * p;
            }
            return sum * spacing;
        }
    }
    throw BadArgument("unknown functional");
}

}  // namespace

std::string_view to_string(Approach approach) {
    switch (approach) {
        case Approach::lfc: return "lfc";
        case Approach::contact: return "contact";
        case Approach::sr: return "sr";
        case Approach::ndm: return "ndm";
        case Approach::maximality: return "maximality";
    }
    return "unknown";
}

std::string_view to_string(Functional functional) {
    switch (functional) {
        case Functional::ks: return "ks";
        case Functional::l1: return "l1";
        case Functional::l2: return "l2";
    }
    return "unknown";
}

Approach parse_approach(std::string_view name) {
    if (name == "lfc") return Approach::lfc;
    if (name == "contact") return Approach::contact;
    if (name == "sr") return Approach::sr;
    if (name == "ndm") return Approach::ndm;
    if (name == "maximality") return Approach::maximality;
    throw ConfigError("unknown approach '" + std::string(name) + "'");
}

Functional parse_functional(std::string_view name) {
    if (name == "ks") return Functional::ks;
    if (name == "l1") return Functional::l1;
    if (name == "l2") return Functional::l2;
    throw ConfigError("unknown functional '" + std::string(name) + "'");
}

void TestConfig::validate() const {
    check_order(s);
    if (ngrid < 2) throw ConfigError("ngrid must be at least 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (!(c > 0.0)) throw ConfigError("c must be positive");
    if (!(a > 0.0)) throw ConfigError("a must be positive");
    if (!(eta > 0.0)) throw ConfigError("eta must be positive");
    if (epsilon && !(*epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (plan.nboot < 1) throw ConfigError("nboot must be at least 1");
    if (weight.enabled) weight.validate();
}

std::size_t ContactSet::count() const {
    return static_cast<std::size_t>(std::count(member.begin(), member.end(), true));
}

double contact_threshold(double c, std::size_t n1, std::size_t n2) {
    const double n = (static_cast<double>(n1) + static_cast<double>(n2)) / 2.0;
    return c * std::log(std::log(n)) / std::sqrt(n);
}

double recentering_threshold(double a, std::size_t n1, std::size_t n2) {
    const double n = static_cast<double>(n1) + static_cast<double>(n2);
    const double a_n = -a * std::sqrt(std::log(std::log(n)));
    return a_n / std::sqrt(n);
}

double default_epsilon(std::size_t n1, std::size_t n2) {
    return std::pow(ScaleFactor::two_sample(n1, n2).lambda, -1.0 / 16.0);
}

ContactSet estimate_contact_set(const CurveValues& d, const CurveValues& q, double threshold) {
    if (q.size() != d.size()) throw BadArgument("weight and curve lengths differ");
    ContactSet set;
    set.threshold = threshold;
    set.member.resize(d.size());
    for (std::size_t g = 0; g < d.size(); ++g) {
        set.member[g] = q[g] * std::abs(d[g]) < threshold;
        set.lebesgue_positive = set.lebesgue_positive || set.member[g];
    }
    return set;
}

RecenteringCurve recentering_curve(const CurveValues& d, double threshold) {
    RecenteringCurve mu{std::vector<double>(d.size(), 0.0), threshold};
    for (std::size_t g = 0; g < d.size(); ++g) {
        if (d[g] < threshold) mu.values[g] = d[g];
    }
    return mu;
}

double contact_replicate(std::span<const double> nu, const CurveValues& q,
                         const ContactSet& contact, double spacing) {
    if (nu.size() != q.size() || contact.member.size() != q.size()) {
        throw BadArgument("contact replicate: curve lengths differ");
    }
    const bool everywhere = !contact.lebesgue_positive;
    double sum = 0.0;
    for (std::size_t g = 0; g < nu.size(); ++g) {
        if (!everywhere && !contact.member[g]) continue;
        const double v = std::max(q[g] * nu[g], 0.0);
        sum += v * v;
    }
    return sum * spacing;
}

TestResult test_sd(const Sample& sample1, const Sample& sample2, const TestConfig& config) {
    const auto start = Clock::now();
    auto setup = prepare(sample1, sample2, config);
    const double statistic = ks_statistic(setup.difference, setup.scale);

    const SimulatedProcess process(setup.samples, setup.grid, config.s, config.plan);
    const double lambda = process.pair_scale(0, 1);
    ResampledDistribution resampled{std::vector<double>(process.replicate_count()),
                                    config.plan.method};
    process.for_each_replicate([&](std::size_t r, const ProcessWorkspace& ws) {
        double best = kNegInf;
        for (std::size_t g = 0; g < process.grid_size(); ++g) {
            best = std::max(best, lambda * (ws.curves[0][g] - ws.curves[1][g]));
        }
        resampled.values[r] = best;
    });
    return finish(std::move(setup), config, Approach::lfc, statistic, std::move(resampled),
                  start);
}

TestResult test_sd_contact(const Sample& sample1, const Sample& sample2,
                           const TestConfig& config) {
    const auto start = Clock::now();
    require_bootstrap_family(config, "the contact-set approach");
    auto setup = prepare(sample1, sample2, config);
    const auto q = weight_q(setup.grid, config.s, config.weight);
    const double statistic = l2_statistic(setup.difference, setup.grid, q, setup.scale);

    const double c_n = contact_threshold(config.c, sample1.size(), sample2.size());
    const auto contact = estimate_contact_set(setup.difference, q, c_n);

    const SimulatedProcess process(setup.samples, setup.grid, config.s, config.plan);
    const double lambda = process.pair_scale(0, 1);
    const double dx = setup.grid.spacing();
    ResampledDistribution resampled{std::vector<double>(process.replicate_count()),
                                    config.plan.method};
    process.for_each_replicate([&](std::size_t r, const ProcessWorkspace& ws) {
        std::vector<double> nu(process.grid_size());
        pair_process(ws, lambda, nu);
        resampled.values[r] = contact_replicate(nu, q, contact, dx);
    });
    auto result = finish(std::move(setup), config, Approach::contact, statistic,
                         std::move(resampled), start);
    result.contact_threshold = c_n;
    return result;
}

TestResult test_sd_sr(const Sample& sample1, const Sample& sample2, const TestConfig& config) {
    const auto start = Clock::now();
    require_bootstrap_family(config, "selective recentering");
    auto setup = prepare(sample1, sample2, config);
    const double statistic = ks_statistic(setup.difference, setup.scale);

    const double threshold = recentering_threshold(config.a, sample1.size(), sample2.size());
    const auto mu = recentering_curve(setup.difference, threshold);

    const SimulatedProcess process(setup.samples, setup.grid, config.s, config.plan);
    const double lambda = process.pair_scale(0, 1);
    ResampledDistribution resampled{std::vector<double>(process.replicate_count()),
                                    config.plan.method};
    process.for_each_replicate([&](std::size_t r, const ProcessWorkspace& ws) {
        double best = kNegInf;
        for (std::size_t g = 0; g < process.grid_size(); ++g) {
            const double nu = lambda * (ws.curves[0][g] - ws.curves[1][g]);
            best = std::max(best, nu + lambda * mu.values[g]);
        }
        resampled.values[r] = best;
    });
    auto result =
        finish(std::move(setup), config, Approach::sr, statistic, std::move(resampled), start);
    result.critical_value = std::max(result.critical_value, config.eta);
    result.recentering_threshold = threshold;
    return result;
}

TestResult test_sd_ndm(const Sample& sample1, const Sample& sample2, const TestConfig& config) {
    const auto start = Clock::now();
    require_bootstrap_family(config, "the numerical delta method");
    auto setup = prepare(sample1, sample2, config);
    const Functional functional = config.functional;
    const double dx = setup.grid.spacing();
    const double lambda = setup.scale.lambda;
    const double eps = config.epsilon.value_or(default_epsilon(sample1.size(), sample2.size()));

    const std::span<const double> d = setup.difference.values;
    const double phi_hat = ndm_functional(functional, d, dx);
    const double statistic =
        functional == Functional::l2 ? lambda * lambda * phi_hat : lambda * phi_hat;

    const SimulatedProcess process(setup.samples, setup.grid, config.s, config.plan);
    const std::size_t n_grid = process.grid_size();
    ResampledDistribution resampled{std::vector<double>(process.replicate_count()),
                                    config.plan.method};
    process.for_each_replicate([&](std::size_t r, const ProcessWorkspace& ws) {
        std::vector<double> z(n_grid);
        std::vector<double> shifted(n_grid);
        pair_process(ws, lambda, z);
        const auto phi_at = [&](double step) {
            for (std::size_t g = 0; g < n_grid; ++g) shifted[g] = d[g] + step * z[g];
            return ndm_functional(functional, shifted, dx);
        };
        if (functional != Functional::l2) {
            resampled.values[r] = (phi_at(eps) - phi_hat) / eps;
        } else if (!config.ndm_three_point) {
            resampled.values[r] = (phi_at(eps) - phi_hat) / (eps * eps);
        } else {
            resampled.values[r] =
                (phi_at(2.0 * eps) - 2.0 * phi_at(eps) + phi_hat) / (2.0 * eps * eps);
        }
    });
    auto result =
        finish(std::move(setup), config, Approach::ndm, statistic, std::move(resampled), start);
    result.epsilon = eps;
    return result;
}

TestResult test_maximality(std::span<const Sample> samples, const TestConfig& config) {
    const auto start = Clock::now();
    config.validate();
    const std::size_t k_count = samples.size();
    if (k_count < 2) throw BadArgument("maximality needs at least 2 prospects");

    const Grid grid = set_grid(samples, config.ngrid);
    std::vector<CurveValues> curves;
    curves.reserve(k_count);
    for (const auto& sample : samples) curves.push_back(integrated_ecdf(sample, grid, config.s));

    struct Pair {
        std::size_t k;
        std::size_t l;
    };
    std::vector<Pair> pairs;
    for (std::size_t k = 0; k < k_count; ++k) {
        for (std::size_t l = k + 1; l < k_count; ++l) {
            pairs.push_back({k, l});
            pairs.push_back({l, k});
        }
    }

    double statistic = std::numeric_limits<double>::infinity();
    for (const auto [k, l] : pairs) {
        const double lambda = ScaleFactor::two_sample(samples[k].size(), samples[l].size()).lambda;
        double best = kNegInf;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            best = std::max(best, curves[k][g] - curves[l][g]);
        }
        statistic = std::min(statistic, lambda * best);
    }

    const SimulatedProcess process(samples, grid, config.s, config.plan);
    std::vector<double> pair_lambda;
    for (const auto [k, l] : pairs) pair_lambda.push_back(process.pair_scale(k, l));

    ResampledDistribution resampled{std::vector<double>(process.replicate_count()),
                                    config.plan.method};
    process.for_each_replicate([&](std::size_t r, const ProcessWorkspace& ws) {
        double value = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto& ck = ws.curves[pairs[p].k];
            const auto& cl = ws.curves[pairs[p].l];
            double best = kNegInf;
            for (std::size_t g = 0; g < process.grid_size(); ++g) {
                best = std::max(best, pair_lambda[p] * (ck[g] - cl[g]));
            }
            value = std::min(value, best);
        }
        resampled.values[r] = value;
    });

    TwoSampleSetup setup;
    setup.samples.assign(samples.begin(), samples.end());
    setup.grid = grid;
    if (k_count == 2) {
        setup.difference = curves[0];
        for (std::size_t g = 0; g < grid.size(); ++g) setup.difference.values[g] -= curves[1][g];
    }
    setup.curves = std::move(curves);
    return finish(std::move(setup), config, Approach::maximality, statistic,
                  std::move(resampled), start);
}

TestResult run_test(std::span<const Sample> samples, const TestConfig& config) {
    if (config.approach == Approach::maximality) return test_maximality(samples, config);
    if (samples.size() != 2) {
        throw ConfigError("approach '" + std::string(to_string(config.approach)) +
                          "' compares exactly two samples, got " +
                          std::to_string(samples.size()));
    }
    switch (config.approach) {
        case Approach::lfc: return test_sd(samples[0], samples[1], config);
        case Approach::contact: return test_sd_contact(samples[0], samples[1], config);
        case Approach::sr: return test_sd_sr(samples[0], samples[1], config);
        case Approach::ndm: return test_sd_ndm(samples[0], samples[1], config);
        case Approach::maximality: break;
    }
    throw ConfigError("unknown approach");
}

std::size_t min_volatility_index(std::span<const double> values) {
    if (values.empty()) throw BadArgument("no candidates to choose from");
    if (values.size() < 3) return 0;
    std::size_t best_index = 1;
    double best_spread = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        const double mean = (values[i - 1] + values[i] + values[i + 1]) / 3.0;
        double ss = 0.0;
        for (std::size_t j = i - 1; j <= i + 1; ++j) ss += (values[j] - mean) * (values[j] - mean);
        const double spread = std::sqrt(ss / 3.0);
        if (spread < best_spread) {
            best_spread = spread;
            best_index = i;
        }
    }
    return best_index;
}

SubsampleScan scan_subsample_size(
    const Sample& sample1, const Sample& sample2, const TestConfig& config,
    std::span<const std::pair<std::size_t, std::size_t>> candidates) {
    if (candidates.empty()) throw BadArgument("no subsample-size candidates given");
    SubsampleScan scan;
    std::vector<double> criticals;
    for (const auto& [b1, b2] : candidates) {
        TestConfig run = config;
        run.approach = Approach::lfc;
        run.plan.method = ResamplingMethod::subsampling;
        run.plan.b1 = b1;
        run.plan.b2 = b2;
        const auto result = test_sd(sample1, sample2, run);
        scan.statistic = result.statistic;
        scan.rows.push_back({b1, b2, result.critical_value, result.p_value});
        criticals.push_back(result.critical_value);
    }
    scan.min_volatility_index = min_volatility_index(criticals);
    scan.mean_critical_value =
        std::accumulate(criticals.begin(), criticals.end(), 0.0) / static_cast<double>(criticals.size());
    std::sort(criticals.begin(), criticals.end());
    const std::size_t mid = criticals.size() / 2;
    scan.median_critical_value = criticals.size() % 2 == 1
                                     ? criticals[mid]
                                     : 0.5 * (criticals[mid - 1] + criticals[mid]);
    return scan;
}

}  // namespace sdtest
