#pragma once

// Direct-loop reference implementations. These deliberately share no code
// with the library: every value is recomputed from its defining sum.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

/// (1 / (N (s-1)!)) * sum_i [x - X_i]_+^(s-1), indicator X_i <= x for s = 1.
inline double integrated_ecdf_at(const std::vector<double>& xs, double x, int s) {
    double sum = 0.0;
    for (const double v : xs) {
        if (s == 1) {
            sum += v <= x ? 1.0 : 0.0;
        } else if (v < x) {
            sum += std::pow(x - v, s - 1);
        }
    }
    return sum / (static_cast<double>(xs.size()) * factorial(s - 1));
}

inline std::vector<double> integrated_ecdf(const std::vector<double>& xs,
                                           const std::vector<double>& grid, int s) {
    std::vector<double> out;
    for (const double x : grid) out.push_back(integrated_ecdf_at(xs, x, s));
    return out;
}

/// Bootstrap-resampled version: observation xs[idx[j]] for every j.
inline std::vector<double> gather(const std::vector<double>& xs,
                                  const std::vector<std::uint32_t>& idx) {
    std::vector<double> out;
    for (const auto i : idx) out.push_back(xs[i]);
    return out;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

inline double ks(const std::vector<double>& d, double lambda) {
    double m = d[0];
    for (const double v : d) m = v > m ? v : m;
    return lambda * m;
}

inline double l1(const std::vector<double>& d, double dx, double lambda) {
    double sum = 0.0;
    for (const double v : d) sum += v > 0 ? v : 0.0;
    return lambda * sum * dx;
}

inline double l2(const std::vector<double>& d, const std::vector<double>& q, double dx,
                 double lambda) {
    double sum = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double v = q[i] * d[i];
        if (v > 0) sum += v * v;
    }
    return lambda * lambda * sum * dx;
}

/// Type-7 quantile via explicit order statistics.
inline double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = 1.0 + p * static_cast<double>(v.size() - 1);  // 1-based rank
    const auto j = static_cast<std::size_t>(h);
    if (j >= v.size()) return v.back();
    return v[j - 1] + (h - static_cast<double>(j)) * (v[j] - v[j - 1]);
}

inline std::vector<double> normal_sample(std::mt19937_64& gen, std::size_t n, double mean = 0.0,
                                         double sd = 1.0) {
    std::normal_distribution<double> dist(mean, sd);
    std::vector<double> out(n);
    for (auto& v : out) v = dist(gen);
    return out;
}

}  // namespace oracle
