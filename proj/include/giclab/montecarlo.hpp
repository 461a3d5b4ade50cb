#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace giclab {

// value ± std_error from `samples` seeded draws. std_error is the sample
// standard deviation of the per-sample contributions divided by √samples.
struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Streaming mean/M2 accumulator with a deterministic merge (Chan et al.).
struct RunningMoments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept;
    void merge(const RunningMoments& other) noexcept;
    MonteCarloEstimate estimate(std::uint64_t seed) const noexcept;
};

// Resolves a worker count: values > 0 are used as given, otherwise the
// hardware concurrency (at least 1).
int resolve_threads(int requested) noexcept;

// Fills `out` (one slot per quantity) with the contributions of sample `index`.
using SampleKernel = std::function<void(std::uint64_t index, std::span<double> out)>;

// Runs `samples` independent evaluations of `kernel` for `quantities`
// simultaneous outputs. Work is split into fixed-size chunks regardless of the
// thread count and chunk results are merged along a fixed binary tree, so the
// returned estimates are bit-identical for any `threads`.
std::vector<MonteCarloEstimate> run_monte_carlo(std::uint64_t samples, std::size_t quantities,
                                                std::uint64_t seed, int threads,
                                                const SampleKernel& kernel);

inline constexpr std::uint64_t kMonteCarloChunk = 2048;

}  // namespace giclab
