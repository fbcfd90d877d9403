#pragma once

// Stochastic dominance tests. Every procedure tests
//   H0: sample1 s-th order dominates sample2, i.e. F1^(s) <= F2^(s) everywhere,
// except test_maximality, which tests stochastic non-maximality among K
// prospects.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdtest/distfn.hpp"
#include "sdtest/resampling.hpp"
#include "sdtest/statistics.hpp"

namespace sdtest {

enum class Approach { lfc, contact, sr, ndm, maximality };
enum class Functional { ks, l1, l2 };

std::string_view to_string(Approach approach);
std::string_view to_string(Functional functional);
Approach parse_approach(std::string_view name);
Functional parse_functional(std::string_view name);

struct TestConfig {
    int s = 1;
    std::size_t ngrid = 100;
    double alpha = 0.05;
    ResamplingPlan plan;
    Approach approach = Approach::lfc;
    /// Functional for the numerical delta method.
    Functional functional = Functional::l1;
    /// Contact-set constant in c_N = c log(log N) / sqrt(N).
    double c = 0.75;
    /// Selective-recentering constant in a_N = -a sqrt(log(log N)).
    double a = 0.1;
    /// Floor on the selective-recentering critical value.
    double eta = 1e-6;
    /// NDM step size; defaults to lambda^(-1/16).
    std::optional<double> epsilon;
    /// Use the three-point second-order quotient for NDM with L2.
    bool ndm_three_point = false;
    /// Tail weight q(x) for the contact-set statistic.
    WeightSpec weight;

    void validate() const;
};

/// Contact-set estimate: member[g] <=> q(x_g) |D(x_g)| < threshold.
struct ContactSet {
    std::vector<bool> member;
    double threshold = 0.0;
    bool lebesgue_positive = false;

    std::size_t count() const;
};

/// mu(x) = D(x) where D(x) < threshold, else 0.
struct RecenteringCurve {
    std::vector<double> values;
    double threshold = 0.0;
};

struct TestResult {
    Approach approach = Approach::lfc;
    double statistic = 0.0;
    double critical_value = 0.0;
    double p_value = 1.0;
    ResampledDistribution resampled;
    Grid grid;
    /// Integrated ECDFs of each prospect on the grid.
    std::vector<CurveValues> curves;
    /// F_1 - F_2 for two-sample tests; empty for maximality with K > 2.
    CurveValues difference;
    std::vector<std::string> labels;
    std::vector<std::size_t> sizes;
    TestConfig config;
    /// Effective tuning values (c_N, a_N / sqrt(N), epsilon) when used.
    std::optional<double> contact_threshold;
    std::optional<double> recentering_threshold;
    std::optional<double> epsilon;
    double elapsed_seconds = 0.0;

    bool reject() const noexcept { return statistic > critical_value; }
};

/// c * log(log N) / sqrt(N) with N = (n1 + n2) / 2.
double contact_threshold(double c, std::size_t n1, std::size_t n2);
/// a_N / sqrt(N) with a_N = -a sqrt(log(log N)) and N = n1 + n2.
double recentering_threshold(double a, std::size_t n1, std::size_t n2);
/// lambda^(-1/16) with lambda = sqrt(n1 n2 / (n1 + n2)).
double default_epsilon(std::size_t n1, std::size_t n2);

ContactSet estimate_contact_set(const CurveValues& d, const CurveValues& q, double threshold);
RecenteringCurve recentering_curve(const CurveValues& d, double threshold);

/// One contact-set replicate: sum of max{q nu, 0}^2 dx over the contact set,
/// or over every grid point when the set is empty.
double contact_replicate(std::span<const double> nu, const CurveValues& q,
                         const ContactSet& contact, double spacing);

/// Kolmogorov-Smirnov statistic with LFC resampling (recentered, pooled,
/// paired, multiplier) or subsampling critical values.
TestResult test_sd(const Sample& sample1, const Sample& sample2, const TestConfig& config);
/// Integral (L2) statistic with contact-set bootstrap critical values.
TestResult test_sd_contact(const Sample& sample1, const Sample& sample2,
                           const TestConfig& config);
/// Kolmogorov-Smirnov statistic with selectively recentered critical values.
TestResult test_sd_sr(const Sample& sample1, const Sample& sample2, const TestConfig& config);
/// KS, L1 or L2 statistic with numerical-delta-method critical values.
TestResult test_sd_ndm(const Sample& sample1, const Sample& sample2, const TestConfig& config);
/// lambda min_{k != l} sup D_kl over every ordered pair of prospects.
TestResult test_maximality(std::span<const Sample> samples, const TestConfig& config);

/// Dispatches on config.approach.
TestResult run_test(std::span<const Sample> samples, const TestConfig& config);

struct SubsampleScanRow {
    std::size_t b1 = 0;
    std::size_t b2 = 0;
    double critical_value = 0.0;
    double p_value = 0.0;
};

struct SubsampleScan {
    double statistic = 0.0;
    std::vector<SubsampleScanRow> rows;
    /// Row with the smallest spread of critical values over its 3-wide window.
    std::size_t min_volatility_index = 0;
    double mean_critical_value = 0.0;
    double median_critical_value = 0.0;
};

/// Index minimizing the standard deviation of `values` over centered windows
/// of three. With fewer than three values every window is the whole column.
std::size_t min_volatility_index(std::span<const double> values);

/// Runs the subsampling test once per candidate (b1, b2) with the same seed.
SubsampleScan scan_subsample_size(const Sample& sample1, const Sample& sample2,
                                  const TestConfig& config,
                                  std::span<const std::pair<std::size_t, std::size_t>> candidates);

}  // namespace sdtest
