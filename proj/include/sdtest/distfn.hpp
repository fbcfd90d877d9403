#pragma once

// Evaluation grids, empirical integrated CDFs of arbitrary order and the
// helpers built on them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sdtest {

/// Largest dominance order accepted anywhere in the library.
inline constexpr int kMaxOrder = 20;

/// A one-dimensional set of finite observations.
class Sample {
public:
    Sample() = default;
    explicit Sample(std::vector<double> values, std::string label = {});

    std::span<const double> values() const noexcept { return values_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
    std::string label_;
};

/// Strictly increasing evaluation points. `spacing()` is (max - min) / (n - 1),
/// the width used by every integral functional.
class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<double> points);

    std::span<const double> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double spacing() const noexcept { return spacing_; }
    double front() const { return points_.front(); }
    double back() const { return points_.back(); }
    double operator[](std::size_t i) const { return points_[i]; }

private:
    std::vector<double> points_;
    double spacing_ = 0.0;
};

/// A function sampled on a grid, tagged with the dominance order it belongs to.
struct CurveValues {
    std::vector<double> values;
    int order = 1;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Parameters of the tail-damping weight q(x). Disabled means q == 1.
struct WeightSpec {
    double z1 = 0.0;
    double z2 = 1.0;
    double a = 1.0;
    double delta = 1.0;
    bool enabled = false;

    void validate() const;
};

/// (s-1)! for 1 <= s <= kMaxOrder.
double order_factorial(int s);

/// Throws BadArgument unless 1 <= s <= kMaxOrder.
void check_order(int s);

/// `ngrid` equally spaced points from the pooled minimum to the pooled maximum.
Grid set_grid(std::span<const Sample> samples, std::size_t ngrid);

/// F^(s)(x) = 1/(N (s-1)!) * sum_i [x - X_i]_+^(s-1) at every grid point. For
/// s = 1 the summand is the indicator X_i <= x.
CurveValues integrated_ecdf(const Sample& sample, const Grid& grid, int s);

/// F_1^(s) - F_2^(s) on the grid.
CurveValues ecdf_difference(const Sample& sample1, const Sample& sample2,
                            const Grid& grid, int s);

CurveValues weight_q(const Grid& grid, int s, const WeightSpec& spec);

/// ln(P_{t+1} / P_t) for consecutive prices.
std::vector<double> log_returns(std::span<const double> prices);

/// Evaluates weighted integrated ECDFs of one fixed base sample on one grid.
///
/// The base values are sorted once. Callers supply a weight per sorted
/// position (bootstrap multiplicities, block indicators, multipliers) and get
///   out[g] = sum_i w_i [x_g - X_(i)]_+^(s-1) / (normalizer * (s-1)!)
/// in O(n + ngrid * s^2). Moments about the current grid point are carried
/// forward with a binomial shift, so for nonnegative weights every term added
/// is nonnegative.
class CurveEvaluator {
public:
    CurveEvaluator(std::span<const double> values, const Grid& grid, int s);

    std::size_t sample_size() const noexcept { return sorted_.size(); }
    std::size_t grid_size() const noexcept { return grid_.size(); }
    int order() const noexcept { return order_; }

    /// Sorted position of original observation `i`.
    std::size_t rank(std::size_t i) const { return rank_[i]; }
    std::span<const double> sorted_values() const noexcept { return sorted_; }

    void evaluate(std::span<const double> sorted_weights, double normalizer,
                  std::span<double> out) const;

    /// Unit weights: the plain integrated ECDF of the base sample.
    std::vector<double> evaluate_unweighted() const;

    /// Multiplicities of `indices` (into the original order) as sorted weights.
    void accumulate_counts(std::span<const std::uint32_t> indices,
                           std::span<double> sorted_weights) const;

private:
    std::vector<double> sorted_;
    std::vector<std::size_t> rank_;
    std::vector<double> grid_;
    int order_;
    double factorial_;
};

}  // namespace sdtest
