#pragma once

// Seeded resampling: bootstrap index sets, subsample blocks, multiplier draws
// and the per-replicate simulated processes built from them.
//
// Every replicate r of every stream k draws from its own generator seeded by
// (seed, k, r). Replicates can therefore be produced in any order, on any
// number of threads, and the result is the same vector.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "sdtest/distfn.hpp"
#include "sdtest/statistics.hpp"

namespace sdtest {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct ResamplingPlan {
    ResamplingMethod method = ResamplingMethod::recentered_bootstrap;
    std::size_t nboot = 200;
    std::optional<std::size_t> b1;
    std::optional<std::size_t> b2;
    std::uint64_t seed = kDefaultSeed;
    /// Worker threads for replicate loops; 0 uses the OpenMP default.
    unsigned threads = 0;

    /// Block length for prospect k: b1 for the first, b2 (or b1) for the rest.
    std::size_t block_size(std::size_t k) const;

    /// Checks the plan against the prospect sizes it will be applied to.
    void validate(std::span<const std::size_t> sizes) const;
};

/// Generator for one (seed, stream, replicate) substream.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t replicate);

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [0, n).
    std::uint32_t below(std::uint32_t n);
    /// Uniform real in the open interval (0, 1).
    double uniform();
    /// Standard normal deviate by inverse-CDF transform of uniform().
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Row-major nboot x n matrix of indices.
class IndexMatrix {
public:
    IndexMatrix() = default;
    IndexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<std::uint32_t> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const std::uint32_t> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    friend bool operator==(const IndexMatrix&, const IndexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint32_t> data_;
};

/// Fills `out` with independent uniform draws from {0, ..., range - 1}.
void draw_index_row(Rng& rng, std::size_t range, std::span<std::uint32_t> out);

IndexMatrix bootstrap_indices(std::size_t n, std::size_t nboot, std::uint64_t seed,
                              std::uint64_t stream = 0);

struct PooledIndices {
    IndexMatrix first;
    IndexMatrix second;
};

/// Draws n1 and n2 indices per replicate into the pooled array of n1 + n2.
PooledIndices pooled_bootstrap_indices(std::size_t n1, std::size_t n2, std::size_t nboot,
                                       std::uint64_t seed);

/// One index row per replicate shared by both samples; n1 must equal n2.
IndexMatrix paired_bootstrap_indices(std::size_t n1, std::size_t n2, std::size_t nboot,
                                     std::uint64_t seed);

/// Half-open range [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// The n - b + 1 overlapping contiguous blocks of length b, in order.
std::vector<IndexRange> subsample_blocks(std::size_t n, std::size_t b);

/// Replaces Rng::normal for multiplier draws (tests use it to pin multipliers).
using NormalDraw = std::function<double(Rng&)>;

/// Scratch buffers owned by one worker while drawing replicates.
struct ProcessWorkspace {
    std::vector<std::vector<double>> curves;
    std::vector<std::vector<double>> weights;
    std::vector<std::uint32_t> indices;
};

/// Per-replicate resampled curves for K prospects on a common grid.
///
/// For replicate r, prospect k receives a curve C_k such that the simulated
/// pair process is pair_scale(k, l) * (C_k - C_l):
///   recentered/paired bootstrap: F*_k - F_k
///   pooled bootstrap:            F*_k drawn from the pooled sample
///   multiplier:                  N_k^-1 sum_i U_i (g_i - mean g) / (s-1)!
///   subsampling:                 F_k on block r (not recentered)
class SimulatedProcess {
public:
    SimulatedProcess(std::span<const Sample> samples, const Grid& grid, int s,
                     const ResamplingPlan& plan, NormalDraw normal_draw = {});

    std::size_t prospects() const noexcept { return sizes_.size(); }
    std::size_t replicate_count() const noexcept { return replicates_; }
    std::size_t grid_size() const noexcept { return grid_size_; }
    const ResamplingPlan& plan() const noexcept { return plan_; }

    /// sqrt(n_k n_l / (n_k + n_l)), with block lengths in place of n for subsampling.
    double pair_scale(std::size_t k, std::size_t l) const;

    /// Integrated ECDF of prospect k on the full sample.
    std::span<const double> base_curve(std::size_t k) const { return base_[k]; }

    ProcessWorkspace make_workspace() const;
    void draw(std::size_t replicate, ProcessWorkspace& ws) const;

    /// Runs draw() for every replicate, then body(replicate, workspace), over
    /// plan().threads workers. Each replicate must only write its own output.
    void for_each_replicate(
        const std::function<void(std::size_t, const ProcessWorkspace&)>& body) const;

private:
    ResamplingPlan plan_;
    std::vector<std::size_t> sizes_;
    std::vector<CurveEvaluator> evaluators_;
    std::vector<std::vector<double>> base_;
    std::size_t grid_size_ = 0;
    std::size_t replicates_ = 0;
    std::size_t pooled_size_ = 0;
    NormalDraw normal_draw_;
};

/// Sup-type multiplier replicates: nboot values of
/// lambda * max_x (C_1(x) - C_2(x)) with fresh standard-normal multipliers.
ResampledDistribution multiplier_replicates(const Sample& sample1, const Sample& sample2,
                                            const Grid& grid, int s, std::size_t nboot,
                                            std::uint64_t seed, NormalDraw normal_draw = {},
                                            unsigned threads = 0);

}  // namespace sdtest
