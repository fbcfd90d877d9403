#include "sdtest/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>

#include <boost/math/distributions/normal.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sdtest/error.hpp"

namespace sdtest {

namespace {

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t replicate) {
    // seed_seq's mixing is fully specified by the standard, so the derived
    // state is identical on every conforming implementation.
    std::seed_seq seq{lo32(seed),      hi32(seed),      lo32(stream), hi32(stream),
                      lo32(replicate), hi32(replicate), 0x5d7e57u};
    return std::mt19937_64(seq);
}

void check_index_range(std::size_t n) {
    if (n > std::numeric_limits<std::uint32_t>::max()) {
        throw BadArgument("sample too large for 32-bit resampling indices");
    }
}

}  // namespace

std::size_t ResamplingPlan::block_size(std::size_t k) const {
    if (k == 0) {
        if (!b1) throw MissingSubsampleSize("subsampling requires b1");
        return *b1;
    }
    if (b2) return *b2;
    if (!b1) throw MissingSubsampleSize("subsampling requires b2");
    return *b1;
}

void ResamplingPlan::validate(std::span<const std::size_t> sizes) const {
    if (sizes.size() < 2) throw BadArgument("resampling needs at least two prospects");
    for (const auto n : sizes) {
        if (n < 2) throw BadArgument("every prospect needs at least 2 observations");
        check_index_range(n);
    }
    switch (method) {
        case ResamplingMethod::subsampling:
            if (!b1 || (sizes.size() == 2 && !b2)) {
                throw MissingSubsampleSize("subsampling requires b1 and b2");
            }
            for (std::size_t k = 0; k < sizes.size(); ++k) {
                const auto b = block_size(k);
                if (b < 2 || b > sizes[k]) {
                    throw BadArgument("subsample size " + std::to_string(b) +
                                      " must lie in [2, " + std::to_string(sizes[k]) + "]");
                }
            }
            break;
        case ResamplingMethod::paired_bootstrap:
            for (const auto n : sizes) {
                if (n != sizes.front()) {
                    throw LengthMismatch("paired bootstrap requires equal sample sizes (" +
                                         std::to_string(sizes.front()) + " vs " +
                                         std::to_string(n) + ")");
                }
            }
            [[fallthrough]];
        default:
            if (nboot < 1) throw BadArgument("nboot must be at least 1");
    }
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t replicate)
    : engine_(substream_engine(seed, stream, replicate)) {}

std::uint32_t Rng::below(std::uint32_t n) {
    // Lemire's multiply-shift with rejection; unbiased and platform independent.
    std::uint64_t m = static_cast<std::uint64_t>(hi32(next())) * n;
    auto low = static_cast<std::uint32_t>(m);
    if (low < n) {
        const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
        while (low < threshold) {
            m = static_cast<std::uint64_t>(hi32(next())) * n;
            low = static_cast<std::uint32_t>(m);
        }
    }
    return static_cast<std::uint32_t>(m >> 32);
}

double Rng::uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1p-53;
}

double Rng::normal() {
    static const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, uniform());
}

void draw_index_row(Rng& rng, std::size_t range, std::span<std::uint32_t> out) {
    check_index_range(range);
    const auto n = static_cast<std::uint32_t>(range);
    for (auto& v : out) v = rng.below(n);
}

IndexMatrix bootstrap_indices(std::size_t n, std::size_t nboot, std::uint64_t seed,
                              std::uint64_t stream) {
    if (n < 2) throw BadArgument("bootstrap needs n >= 2");
    if (nboot < 1) throw BadArgument("nboot must be at least 1");
    IndexMatrix m(nboot, n);
    for (std::size_t r = 0; r < nboot; ++r) {
        Rng rng(seed, stream, r);
        draw_index_row(rng, n, m.row(r));
    }
    return m;
}

PooledIndices pooled_bootstrap_indices(std::size_t n1, std::size_t n2, std::size_t nboot,
                                       std::uint64_t seed) {
    if (n1 < 2 || n2 < 2) throw BadArgument("pooled bootstrap needs n >= 2 per sample");
    if (nboot < 1) throw BadArgument("nboot must be at least 1");
    PooledIndices out{IndexMatrix(nboot, n1), IndexMatrix(nboot, n2)};
    for (std::size_t r = 0; r < nboot; ++r) {
        Rng first(seed, 0, r);
        draw_index_row(first, n1 + n2, out.first.row(r));
        Rng second(seed, 1, r);
        draw_index_row(second, n1 + n2, out.second.row(r));
    }
    return out;
}

IndexMatrix paired_bootstrap_indices(std::size_t n1, std::size_t n2, std::size_t nboot,
                                     std::uint64_t seed) {
    if (n1 != n2) {
        throw LengthMismatch("paired bootstrap requires equal sample sizes (" +
                             std::to_string(n1) + " vs " + std::to_string(n2) + ")");
    }
    return bootstrap_indices(n1, nboot, seed, 0);
}

std::vector<IndexRange> subsample_blocks(std::size_t n, std::size_t b) {
    if (b < 2 || b > n) {
        throw BadArgument("block length " + std::to_string(b) + " must lie in [2, " +
                          std::to_string(n) + "]");
    }
    std::vector<IndexRange> blocks(n - b + 1);
    for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] = {i, i + b};
    return blocks;
}

SimulatedProcess::SimulatedProcess(std::span<const Sample> samples, const Grid& grid, int s,
                                   const ResamplingPlan& plan, NormalDraw normal_draw)
    : plan_(plan), grid_size_(grid.size()), normal_draw_(std::move(normal_draw)) {
    check_order(s);
    sizes_.reserve(samples.size());
    for (const auto& sample : samples) sizes_.push_back(sample.size());
    plan_.validate(sizes_);

    for (const auto& sample : samples) {
        evaluators_.emplace_back(sample.values(), grid, s);
        base_.push_back(evaluators_.back().evaluate_unweighted());
    }

    switch (plan_.method) {
        case ResamplingMethod::subsampling:
            replicates_ = std::numeric_limits<std::size_t>::max();
            for (std::size_t k = 0; k < sizes_.size(); ++k) {
                replicates_ = std::min(replicates_, sizes_[k] - plan_.block_size(k) + 1);
            }
            break;
        case ResamplingMethod::pooled_bootstrap: {
            std::vector<double> pooled;
            for (const auto& sample : samples) {
                pooled.insert(pooled.end(), sample.values().begin(), sample.values().end());
            }
            pooled_size_ = pooled.size();
            check_index_range(pooled_size_);
            evaluators_.emplace_back(pooled, grid, s);
            replicates_ = plan_.nboot;
            break;
        }
        default:
            replicates_ = plan_.nboot;
    }
}

double SimulatedProcess::pair_scale(std::size_t k, std::size_t l) const {
    double a = static_cast<double>(sizes_[k]);
    double b = static_cast<double>(sizes_[l]);
    if (plan_.method == ResamplingMethod::subsampling) {
        a = static_cast<double>(plan_.block_size(k));
        b = static_cast<double>(plan_.block_size(l));
    }
    return std::sqrt(a * b / (a + b));
}

ProcessWorkspace SimulatedProcess::make_workspace() const {
    ProcessWorkspace ws;
    ws.curves.assign(sizes_.size(), std::vector<double>(grid_size_));
    const std::size_t largest = pooled_size_ > 0 ? pooled_size_
                                                 : *std::max_element(sizes_.begin(), sizes_.end());
    ws.weights.assign(1, std::vector<double>(largest));
    ws.indices.resize(largest);
    return ws;
}

void SimulatedProcess::draw(std::size_t replicate, ProcessWorkspace& ws) const {
    const std::size_t prospects = sizes_.size();
    switch (plan_.method) {
        case ResamplingMethod::recentered_bootstrap:
            for (std::size_t k = 0; k < prospects; ++k) {
                const auto& ev = evaluators_[k];
                Rng rng(plan_.seed, k, replicate);
                const std::span idx(ws.indices.data(), sizes_[k]);
                const std::span w(ws.weights[0].data(), sizes_[k]);
                draw_index_row(rng, sizes_[k], idx);
                ev.accumulate_counts(idx, w);
                ev.evaluate(w, static_cast<double>(sizes_[k]), ws.curves[k]);
                for (std::size_t g = 0; g < grid_size_; ++g) ws.curves[k][g] -= base_[k][g];
            }
            break;
        case ResamplingMethod::paired_bootstrap: {
            Rng rng(plan_.seed, 0, replicate);
            const std::span idx(ws.indices.data(), sizes_[0]);
            draw_index_row(rng, sizes_[0], idx);
            for (std::size_t k = 0; k < prospects; ++k) {
                const auto& ev = evaluators_[k];
                const std::span w(ws.weights[0].data(), sizes_[k]);
                ev.accumulate_counts(idx, w);
                ev.evaluate(w, static_cast<double>(sizes_[k]), ws.curves[k]);
                for (std::size_t g = 0; g < grid_size_; ++g) ws.curves[k][g] -= base_[k][g];
            }
            break;
        }
        case ResamplingMethod::pooled_bootstrap: {
            const auto& pooled = evaluators_.back();
            for (std::size_t k = 0; k < prospects; ++k) {
                Rng rng(plan_.seed, k, replicate);
                const std::span idx(ws.indices.data(), sizes_[k]);
                draw_index_row(rng, pooled_size_, idx);
                pooled.accumulate_counts(idx, ws.weights[0]);
                pooled.evaluate(ws.weights[0], static_cast<double>(sizes_[k]), ws.curves[k]);
            }
            break;
        }
        case ResamplingMethod::multiplier:
            for (std::size_t k = 0; k < prospects; ++k) {
                const auto& ev = evaluators_[k];
                Rng rng(plan_.seed, k, replicate);
                const std::span w(ws.weights[0].data(), sizes_[k]);
                for (std::size_t i = 0; i < sizes_[k]; ++i) {
                    w[ev.rank(i)] = normal_draw_ ? normal_draw_(rng) : rng.normal();
                }
                // Summed in sorted order, like the evaluator, so the s = 1
                // curve is exactly 0 at the top of the grid.
                double total = 0.0;
                for (const double u : w) total += u;
                const double n = static_cast<double>(sizes_[k]);
                ev.evaluate(w, n, ws.curves[k]);
                const double mean_multiplier = total / n;
                for (std::size_t g = 0; g < grid_size_; ++g) {
                    ws.curves[k][g] -= base_[k][g] * mean_multiplier;
                }
            }
            break;
        case ResamplingMethod::subsampling:
            for (std::size_t k = 0; k < prospects; ++k) {
                const auto& ev = evaluators_[k];
                const std::size_t b = plan_.block_size(k);
                const std::span w(ws.weights[0].data(), sizes_[k]);
                std::fill(w.begin(), w.end(), 0.0);
                for (std::size_t i = replicate; i < replicate + b; ++i) w[ev.rank(i)] = 1.0;
                ev.evaluate(w, static_cast<double>(b), ws.curves[k]);
            }
            break;
    }
}

void SimulatedProcess::for_each_replicate(
    const std::function<void(std::size_t, const ProcessWorkspace&)>& body) const {
    const auto count = static_cast<std::ptrdiff_t>(replicates_);
    std::exception_ptr failure;
    std::mutex failure_mutex;
#ifdef _OPENMP
    const int threads = plan_.threads > 0 ? static_cast<int>(plan_.threads) : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
#endif
    {
        auto ws = make_workspace();
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (std::ptrdiff_t r = 0; r < count; ++r) {
            try {
                draw(static_cast<std::size_t>(r), ws);
                body(static_cast<std::size_t>(r), ws);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
}

ResampledDistribution multiplier_replicates(const Sample& sample1, const Sample& sample2,
                                            const Grid& grid, int s, std::size_t nboot,
                                            std::uint64_t seed, NormalDraw normal_draw,
                                            unsigned threads) {
    ResamplingPlan plan;
    plan.method = ResamplingMethod::multiplier;
    plan.nboot = nboot;
    plan.seed = seed;
    plan.threads = threads;
    const std::vector<Sample> samples{sample1, sample2};
    const SimulatedProcess process(samples, grid, s, plan, std::move(normal_draw));
    const double lambda = process.pair_scale(0, 1);

    ResampledDistribution out{std::vector<double>(process.replicate_count()),
                              ResamplingMethod::multiplier};
    process.for_each_replicate([&](std::size_t r, const ProcessWorkspace& ws) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < process.grid_size(); ++g) {
            best = std::max(best, lambda * (ws.curves[0][g] - ws.curves[1][g]));
        }
        out.values[r] = best;
    });
    return out;
}

}  // namespace sdtest
