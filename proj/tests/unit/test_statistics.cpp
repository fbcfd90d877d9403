#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sdtest/error.hpp"
#include "sdtest/statistics.hpp"

using namespace sdtest;

namespace {

CurveValues curve(std::vector<double> v) { return {std::move(v), 1}; }

}  // namespace

TEST_CASE("ks_statistic") {
    CHECK(ks_statistic(curve({0, 0, 0}), ScaleFactor::unit(3.0)) == 0.0);
    CHECK(ks_statistic(curve({-0.1, 0.3, 0.2}), ScaleFactor::unit(2.0)) == doctest::Approx(0.6));
    CHECK(ks_statistic(curve({-0.4, -0.1, 0.0}), ScaleFactor::unit(2.0)) == 0.0);
    // The supremum may be negative when D < 0 everywhere.
    CHECK(ks_statistic(curve({-0.4, -0.1}), ScaleFactor::unit(1.0)) == -0.1);
}

TEST_CASE("l1 and l2 statistics follow the rectangle rule") {
    const Grid grid(oracle::linspace(0.0, 1.0, 11));
    const auto d = curve(std::vector<double>(11, 0.1));
    CHECK(l1_statistic(d, grid, ScaleFactor::unit(1.0)) == doctest::Approx(0.11).epsilon(1e-14));
    const auto ones = curve(std::vector<double>(11, 1.0));
    CHECK(l2_statistic(d, grid, ones, ScaleFactor::unit(10.0)) ==
          doctest::Approx(1.1).epsilon(1e-14));
    const auto negative = curve(std::vector<double>(11, -0.2));
    CHECK(l1_statistic(negative, grid, ScaleFactor::unit(5.0)) == 0.0);
    CHECK(l2_statistic(negative, grid, ones, ScaleFactor::unit(5.0)) == 0.0);
    const auto zeros = curve(std::vector<double>(11, 0.0));
    CHECK(l2_statistic(d, grid, zeros, ScaleFactor::unit(5.0)) == 0.0);
}

TEST_CASE("ScaleFactor::two_sample") {
    CHECK(ScaleFactor::two_sample(500, 500).lambda == doctest::Approx(std::sqrt(250.0)));
    CHECK(ScaleFactor::two_sample(50, 50).lambda == 5.0);
    CHECK(ScaleFactor::two_sample(30, 60).lambda == doctest::Approx(std::sqrt(20.0)));
}

TEST_CASE("minmax_statistic is the minimum of the per-curve maxima") {
    const std::vector<CurveValues> pair{curve({0.2, 1.0}), curve({-1.0, -3.0})};
    CHECK(minmax_statistic(pair, ScaleFactor::unit(1.0)) == -1.0);
    const std::vector<CurveValues> zero{curve({0, 0}), curve({0, 0})};
    CHECK(minmax_statistic(zero, ScaleFactor::unit(7.0)) == 0.0);
}

TEST_CASE("functionals match direct loops on 1000 random curves") {
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<int> len(2, 25);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.0, 2.0);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto n = static_cast<std::size_t>(len(gen));
        std::vector<double> d(n);
        std::vector<double> q(n);
        for (auto& v : d) v = val(gen);
        for (auto& v : q) v = pos(gen);
        const double lambda = pos(gen) * 5.0 + 0.1;
        const Grid grid(oracle::linspace(-pos(gen), pos(gen) + 0.5, n));
        const auto scale = ScaleFactor::unit(lambda);
        worst = std::max(worst, std::abs(ks_statistic(curve(d), scale) - oracle::ks(d, lambda)));
        worst = std::max(worst, std::abs(l1_statistic(curve(d), grid, scale) -
                                         oracle::l1(d, grid.spacing(), lambda)));
        worst = std::max(worst, std::abs(l2_statistic(curve(d), grid, curve(q), scale) -
                                         oracle::l2(d, q, grid.spacing(), lambda)));
        std::vector<double> e(n);
        for (auto& v : e) v = val(gen);
        const std::vector<CurveValues> pair{curve(d), curve(e)};
        const double want = std::min(oracle::ks(d, lambda), oracle::ks(e, lambda));
        worst = std::max(worst, std::abs(minmax_statistic(pair, scale) - want));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("l1/l2 vanish exactly when the positive part does") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    const Grid grid(oracle::linspace(0, 1, 9));
    const auto ones = curve(std::vector<double>(9, 1.0));
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> d(9);
        for (auto& v : d) v = val(gen);
        const bool any_positive = std::any_of(d.begin(), d.end(), [](double v) { return v > 0; });
        CHECK((l1_statistic(curve(d), grid, ScaleFactor::unit(1.0)) > 0) == any_positive);
        CHECK((l2_statistic(curve(d), grid, ones, ScaleFactor::unit(1.0)) > 0) == any_positive);
        CHECK(ks_statistic(curve(d), ScaleFactor::unit(2.0)) >= 2.0 * d.back());
    }
}

TEST_CASE("quantile uses linear interpolation at rank 1 + p (n - 1)") {
    const std::vector<double> v{4, 2, 3, 1};
    CHECK(quantile(v, 0.5) == 2.5);
    CHECK(quantile(v, 1.0) == 4.0);
    CHECK(quantile(v, 0.0) == 1.0);
    const std::vector<double> single{7};
    CHECK(quantile(single, 0.3) == 7.0);
    CHECK_THROWS_AS(quantile(std::vector<double>{}, 0.5), BadArgument);
    CHECK_THROWS_AS(quantile(v, 1.5), BadArgument);
}

TEST_CASE("quantile matches the order-statistic oracle and is monotone in p") {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<int> len(1, 60);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 300; ++rep) {
        const auto v = oracle::normal_sample(gen, static_cast<std::size_t>(len(gen)));
        double prev = -INFINITY;
        for (int k = 0; k <= 20; ++k) {
            const double p = k / 20.0;
            const double got = quantile(v, p);
            CHECK(got == doctest::Approx(oracle::quantile(v, p)).epsilon(1e-14));
            CHECK(got >= prev);
            prev = got;
        }
        const double p = u(gen);
        CHECK(quantile(v, p) == doctest::Approx(oracle::quantile(v, p)).epsilon(1e-13));
    }
}

TEST_CASE("p_value counts replicates at or above the statistic") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(p_value(v, 2.5) == 0.5);
    CHECK(p_value(v, 5.0) == 0.0);
    CHECK(p_value(v, 0.0) == 1.0);
    CHECK(p_value(v, 2.0) == 0.75);
    std::mt19937_64 gen(9);
    const auto r = oracle::normal_sample(gen, 101);
    double prev = 1.0;
    for (double t = -4.0; t <= 4.0; t += 0.05) {
        const double p = p_value(r, t);
        CHECK(p <= prev);
        CHECK(p >= 0.0);
        prev = p;
    }
}

TEST_CASE("resampling method names") {
    CHECK(parse_resampling_method("bootstrap") == ResamplingMethod::recentered_bootstrap);
    CHECK(parse_resampling_method("pooled") == ResamplingMethod::pooled_bootstrap);
    CHECK(parse_resampling_method("paired") == ResamplingMethod::paired_bootstrap);
    CHECK(parse_resampling_method("subsampling") == ResamplingMethod::subsampling);
    CHECK(parse_resampling_method("multiplier") == ResamplingMethod::multiplier);
    CHECK(to_string(ResamplingMethod::pooled_bootstrap) == "pooled");
    CHECK_THROWS_AS(parse_resampling_method("jackknife"), ConfigError);
}
