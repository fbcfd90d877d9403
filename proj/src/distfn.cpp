#include "sdtest/distfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "sdtest/error.hpp"

namespace sdtest {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw BadArgument(std::string(what) + " contains a non-finite value at position " +
                              std::to_string(i));
        }
    }
}

// Pascal's triangle up to row kMaxOrder - 1.
constexpr auto kBinomial = [] {
    std::array<std::array<double, kMaxOrder>, kMaxOrder> c{};
    for (int n = 0; n < kMaxOrder; ++n) {
        c[n][0] = 1.0;
        for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k < n ? c[n - 1][k] : 0.0);
    }
    return c;
}();

}  // namespace

Sample::Sample(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
    if (values_.size() < 2) {
        throw BadArgument("a sample needs at least 2 observations, got " +
                          std::to_string(values_.size()));
    }
    require_finite(values_, "sample");
}

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw BadArgument("a grid needs at least 2 points");
    require_finite(points_, "grid");
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i] > points_[i - 1])) {
            throw DegenerateSupport("grid points must be strictly increasing");
        }
    }
    spacing_ = (points_.back() - points_.front()) / static_cast<double>(points_.size() - 1);
}

void WeightSpec::validate() const {
    if (!(z1 < z2)) throw BadArgument("weight: z1 must be smaller than z2");
    if (!(a > 0.0)) throw BadArgument("weight: a must be positive");
    if (!(delta > 0.0)) throw BadArgument("weight: delta must be positive");
}

void check_order(int s) {
    if (s < 1 || s > kMaxOrder) {
        throw BadArgument("dominance order must lie in [1, " + std::to_string(kMaxOrder) +
                          "], got " + std::to_string(s));
    }
}

double order_factorial(int s) {
    check_order(s);
    double f = 1.0;
    for (int k = 2; k < s; ++k) f *= k;
    return f;
}

Grid set_grid(std::span<const Sample> samples, std::size_t ngrid) {
    if (ngrid < 2) throw BadArgument("ngrid must be at least 2");
    if (samples.empty()) throw BadArgument("set_grid needs at least one sample");
    double lo = samples.front()[0];
    double hi = lo;
    for (const auto& sample : samples) {
        const auto [mn, mx] = std::minmax_element(sample.values().begin(), sample.values().end());
        lo = std::min(lo, *mn);
        hi = std::max(hi, *mx);
    }
    if (!(hi > lo)) throw DegenerateSupport("pooled samples have zero-width support");

    std::vector<double> points(ngrid);
    const double width = hi - lo;
    const double last = static_cast<double>(ngrid - 1);
    for (std::size_t i = 0; i < ngrid; ++i) {
        points[i] = lo + width * (static_cast<double>(i) / last);
    }
    points.back() = hi;
    return Grid(std::move(points));
}

CurveValues integrated_ecdf(const Sample& sample, const Grid& grid, int s) {
    CurveEvaluator evaluator(sample.values(), grid, s);
    return {evaluator.evaluate_unweighted(), s};
}

CurveValues ecdf_difference(const Sample& sample1, const Sample& sample2, const Grid& grid,
                            int s) {
    auto f1 = integrated_ecdf(sample1, grid, s);
    const auto f2 = integrated_ecdf(sample2, grid, s);
    for (std::size_t g = 0; g < f1.size(); ++g) f1.values[g] -= f2.values[g];
    return f1;
}

CurveValues weight_q(const Grid& grid, int s, const WeightSpec& spec) {
    check_order(s);
    CurveValues q{std::vector<double>(grid.size(), 1.0), s};
    if (!spec.enabled) return q;
    spec.validate();
    const double power = std::max(static_cast<double>(s - 1), 1.0 + spec.delta);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double x = grid[g];
        if (x > spec.z2) {
            q.values[g] = spec.a / (spec.a + std::pow(x - spec.z2, power));
        } else if (x < spec.z1) {
            q.values[g] = spec.a / (spec.a + std::pow(spec.z1 - x, power));
        }
    }
    return q;
}

std::vector<double> log_returns(std::span<const double> prices) {
    if (prices.size() < 2) throw BadArgument("log returns need at least 2 prices");
    for (std::size_t t = 0; t < prices.size(); ++t) {
        if (!std::isfinite(prices[t])) {
            throw BadArgument("price at position " + std::to_string(t) + " is not finite");
        }
        if (prices[t] <= 0.0) {
            throw NonPositivePrice("price at position " + std::to_string(t) +
                                   " is not positive");
        }
    }
    std::vector<double> out(prices.size() - 1);
    for (std::size_t t = 0; t + 1 < prices.size(); ++t) {
        out[t] = std::log(prices[t + 1] / prices[t]);
    }
    return out;
}

CurveEvaluator::CurveEvaluator(std::span<const double> values, const Grid& grid, int s)
    : grid_(grid.points().begin(), grid.points().end()),
      order_(s),
      factorial_(order_factorial(s)) {
    if (values.empty()) throw BadArgument("cannot evaluate an empty sample");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
    sorted_.resize(values.size());
    rank_.resize(values.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        sorted_[pos] = values[order[pos]];
        rank_[order[pos]] = pos;
    }
}

void CurveEvaluator::evaluate(std::span<const double> sorted_weights, double normalizer,
                              std::span<double> out) const {
    if (sorted_weights.size() != sorted_.size() || out.size() != grid_.size()) {
        throw BadArgument("curve evaluation: buffer sizes do not match sample/grid");
    }
    const int m = order_;
    std::array<double, kMaxOrder> moment{};
    std::array<double, kMaxOrder> shift_pow{};
    const double denominator = normalizer * factorial_;

    std::size_t next = 0;
    double previous = grid_.front();
    for (std::size_t g = 0; g < grid_.size(); ++g) {
        const double x = grid_[g];
        if (m > 1 && g > 0) {
            // moment_j(x) = sum_k C(j,k) (x - previous)^(j-k) moment_k(previous)
            const double h = x - previous;
            shift_pow[0] = 1.0;
            for (int j = 1; j < m; ++j) shift_pow[j] = shift_pow[j - 1] * h;
            for (int j = m - 1; j >= 1; --j) {
                double acc = moment[j];
                for (int k = 0; k < j; ++k) acc += kBinomial[j][k] * shift_pow[j - k] * moment[k];
                moment[j] = acc;
            }
        }
        for (; next < sorted_.size() && sorted_[next] <= x; ++next) {
            const double w = sorted_weights[next];
            if (w == 0.0) continue;
            const double d = x - sorted_[next];
            double term = w;
            for (int j = 0; j < m; ++j) {
                moment[j] += term;
                term *= d;
            }
        }
        out[g] = moment[m - 1] / denominator;
        previous = x;
    }
}

std::vector<double> CurveEvaluator::evaluate_unweighted() const {
    const std::vector<double> ones(sorted_.size(), 1.0);
    std::vector<double> out(grid_.size());
    evaluate(ones, static_cast<double>(sorted_.size()), out);
    return out;
}

void CurveEvaluator::accumulate_counts(std::span<const std::uint32_t> indices,
                                       std::span<double> sorted_weights) const {
    std::fill(sorted_weights.begin(), sorted_weights.end(), 0.0);
    for (const auto i : indices) sorted_weights[rank_[i]] += 1.0;
}

}  // namespace sdtest
