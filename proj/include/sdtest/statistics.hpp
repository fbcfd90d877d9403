#pragma once

// Scalar functionals of difference curves, quantiles and p-values.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sdtest/distfn.hpp"

namespace sdtest {

enum class ResamplingMethod {
    recentered_bootstrap,
    pooled_bootstrap,
    paired_bootstrap,
    subsampling,
    multiplier,
};

/// CLI spelling: bootstrap | pooled | paired | subsampling | multiplier.
std::string_view to_string(ResamplingMethod method);
ResamplingMethod parse_resampling_method(std::string_view name);

/// Two-sample normalization sqrt(n1 n2 / (n1 + n2)).
struct ScaleFactor {
    double lambda = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;

    static ScaleFactor two_sample(std::size_t n1, std::size_t n2);
    /// A bare multiplier with no sample sizes attached.
    static ScaleFactor unit(double lambda = 1.0);
};

struct ResampledDistribution {
    std::vector<double> values;
    ResamplingMethod method = ResamplingMethod::recentered_bootstrap;

    std::size_t size() const noexcept { return values.size(); }
};

// Span overloads are the hot path used inside the resampling loops.
double ks_statistic(std::span<const double> d, double lambda);
double l1_statistic(std::span<const double> d, double spacing, double lambda);
double l2_statistic(std::span<const double> d, std::span<const double> q, double spacing,
                    double lambda);

/// lambda * max_x D(x).
double ks_statistic(const CurveValues& d, const ScaleFactor& scale);
/// lambda * sum_x max{D(x), 0} * dx over every grid point.
double l1_statistic(const CurveValues& d, const Grid& grid, const ScaleFactor& scale);
/// lambda^2 * sum_x max{q(x) D(x), 0}^2 * dx over every grid point.
double l2_statistic(const CurveValues& d, const Grid& grid, const CurveValues& q,
                    const ScaleFactor& scale);
/// lambda * min over curves of max_x D(x).
double minmax_statistic(std::span<const CurveValues> curves, const ScaleFactor& scale);

/// Linear interpolation between order statistics at 1-based rank 1 + p (n - 1).
double quantile(std::span<const double> values, double p);

/// Fraction of replicates >= stat.
double p_value(std::span<const double> resampled, double stat);
inline double p_value(const ResampledDistribution& resampled, double stat) {
    return p_value(resampled.values, stat);
}

}  // namespace sdtest
