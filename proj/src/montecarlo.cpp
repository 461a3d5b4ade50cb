#include "giclab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "giclab/error.hpp"

namespace giclab {

void RunningMoments::add(double x) noexcept {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
}

void RunningMoments::merge(const RunningMoments& other) noexcept {
    if (other.count == 0.0) return;
    if (count == 0.0) {
        *this = other;
        return;
    }
    const double n = count + other.count;
    const double delta = other.mean - mean;
    mean += delta * (other.count / n);
    m2 += other.m2 + delta * delta * (count * other.count / n);
    count = n;
}

MonteCarloEstimate RunningMoments::estimate(std::uint64_t seed) const noexcept {
    MonteCarloEstimate e;
    e.value = mean;
    e.samples = static_cast<std::uint64_t>(count);
    e.seed = seed;
    e.std_error = count > 1.0 ? std::sqrt(std::max(0.0, m2 / (count - 1.0)) / count) : 0.0;
    return e;
}

int resolve_threads(int requested) noexcept {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

// Pairwise merge over chunk results in a fixed tree shape.
RunningMoments tree_merge(std::vector<RunningMoments>& level) {
    while (level.size() > 1) {
        std::vector<RunningMoments> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            RunningMoments m = level[i];
            if (i + 1 < level.size()) m.merge(level[i + 1]);
            next.push_back(m);
        }
        level.swap(next);
    }
    return level.empty() ? RunningMoments{} : level.front();
}

}  // namespace

std::vector<MonteCarloEstimate> run_monte_carlo(std::uint64_t samples, std::size_t quantities,
                                                std::uint64_t seed, int threads,
                                                const SampleKernel& kernel) {
    if (samples == 0) throw InvalidArgument("Monte Carlo: samples must be >= 1");
    if (quantities == 0) throw InvalidArgument("Monte Carlo: at least one quantity required");
    const std::uint64_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
    std::vector<std::vector<RunningMoments>> per_chunk(chunks, std::vector<RunningMoments>(quantities));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        std::vector<double> out(quantities);
        try {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1);
                if (c >= chunks) break;
                const std::uint64_t begin = c * kMonteCarloChunk;
                const std::uint64_t end = std::min(samples, begin + kMonteCarloChunk);
                auto& acc = per_chunk[c];
                for (std::uint64_t i = begin; i < end; ++i) {
                    kernel(i, out);
                    for (std::size_t q = 0; q < quantities; ++q) acc[q].add(out[q]);
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(chunks);
        }
    };

    const int workers = static_cast<int>(std::min<std::uint64_t>(
        static_cast<std::uint64_t>(resolve_threads(threads)), chunks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<MonteCarloEstimate> result;
    result.reserve(quantities);
    for (std::size_t q = 0; q < quantities; ++q) {
        std::vector<RunningMoments> level;
        level.reserve(chunks);
        for (std::uint64_t c = 0; c < chunks; ++c) level.push_back(per_chunk[c][q]);
        result.push_back(tree_merge(level).estimate(seed));
    }
    return result;
}

}  // namespace giclab
