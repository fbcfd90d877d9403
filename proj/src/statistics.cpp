#include "sdtest/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdtest/error.hpp"

namespace sdtest {

std::string_view to_string(ResamplingMethod method) {
    switch (method) {
        case ResamplingMethod::recentered_bootstrap: return "bootstrap";
        case ResamplingMethod::pooled_bootstrap: return "pooled";
        case ResamplingMethod::paired_bootstrap: return "paired";
        case ResamplingMethod::subsampling: return "subsampling";
        case ResamplingMethod::multiplier: return "multiplier";
    }
    return "unknown";
}

ResamplingMethod parse_resampling_method(std::string_view name) {
    if (name == "bootstrap") return ResamplingMethod::recentered_bootstrap;
    if (name == "pooled") return ResamplingMethod::pooled_bootstrap;
    if (name == "paired" || name == "paired_bootstrap") return ResamplingMethod::paired_bootstrap;
    if (name == "subsampling") return ResamplingMethod::subsampling;
    if (name == "multiplier") return ResamplingMethod::multiplier;
    throw ConfigError("unknown resampling method '" + std::string(name) + "'");
}

ScaleFactor ScaleFactor::two_sample(std::size_t n1, std::size_t n2) {
    if (n1 == 0 || n2 == 0) throw BadArgument("sample sizes must be positive");
    const double a = static_cast<double>(n1);
    const double b = static_cast<double>(n2);
    return {std::sqrt(a * b / (a + b)), n1, n2};
}

ScaleFactor ScaleFactor::unit(double lambda) {
    if (!(lambda > 0.0)) throw BadArgument("scale must be positive");
    return {lambda, 0, 0};
}

double ks_statistic(std::span<const double> d, double lambda) {
    if (d.empty()) throw BadArgument("KS statistic of an empty curve");
    return lambda * *std::max_element(d.begin(), d.end());
}

double l1_statistic(std::span<const double> d, double spacing, double lambda) {
    double sum = 0.0;
    for (const double v : d) sum += std::max(v, 0.0);
    return lambda * sum * spacing;
}

double l2_statistic(std::span<const double> d, std::span<const double> q, double spacing,
                    double lambda) {
    if (q.size() != d.size()) throw BadArgument("weight and curve lengths differ");
    double sum = 0.0;
    for (std::size_t g = 0; g < d.size(); ++g) {
        const double v = std::max(q[g] * d[g], 0.0);
        sum += v * v;
    }
    return lambda * lambda * sum * spacing;
}

double ks_statistic(const CurveValues& d, const ScaleFactor& scale) {
    return ks_statistic(d.values, scale.lambda);
}

double l1_statistic(const CurveValues& d, const Grid& grid, const ScaleFactor& scale) {
    if (d.size() != grid.size()) throw BadArgument("curve is not aligned with the grid");
    return l1_statistic(d.values, grid.spacing(), scale.lambda);
}

double l2_statistic(const CurveValues& d, const Grid& grid, const CurveValues& q,
                    const ScaleFactor& scale) {
    if (d.size() != grid.size()) throw BadArgument("curve is not aligned with the grid");
    return l2_statistic(d.values, q.values, grid.spacing(), scale.lambda);
}

double minmax_statistic(std::span<const CurveValues> curves, const ScaleFactor& scale) {
    if (curves.empty()) throw BadArgument("min-max statistic needs at least one curve");
    double best = ks_statistic(curves.front(), scale);
    for (const auto& curve : curves.subspan(1)) best = std::min(best, ks_statistic(curve, scale));
    return best;
}

double quantile(std::span<const double> values, double p) {
    if (values.empty()) throw BadArgument("quantile of an empty set");
    if (!(p >= 0.0 && p <= 1.0)) throw BadArgument("quantile level must lie in [0, 1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double p_value(std::span<const double> resampled, double stat) {
    if (resampled.empty()) throw BadArgument("p-value of an empty replicate set");
    const auto hits = std::count_if(resampled.begin(), resampled.end(),
                                    [stat](double v) { return v >= stat; });
    return static_cast<double>(hits) / static_cast<double>(resampled.size());
}

}  // namespace sdtest
