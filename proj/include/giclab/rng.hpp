#pragma once

#include <array>
#include <cstdint>

namespace giclab {

// Counter-based random stream (Philox4x32-10). A stream is identified by a
// 64-bit seed and a 64-bit stream counter; the k-th draw of a given
// (seed, counter) pair is a pure function of (seed, counter, k), so Monte Carlo
// samples can be assigned to workers in any order without changing results.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t counter) noexcept
        : seed_(seed), counter_(counter) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t counter() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept;

    // Uniform on the open interval (0, 1).
    double uniform() noexcept;

    // Standard normal via Box-Muller; each call consumes two uniforms.
    double normal() noexcept;

    // Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

// Raw Philox4x32-10 bijection; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

}  // namespace giclab
