#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "giclab/dists.hpp"
#include "giclab/interference.hpp"
#include "giclab/montecarlo.hpp"

namespace giclab {

// Exact-posterior cost caps.
inline constexpr std::size_t kMaxBlocklength = 32;
inline constexpr std::uint64_t kMaxCodewords = 1u << 16;
inline constexpr std::uint64_t kMaxCodebookEntries = 10000;  // m·n
inline constexpr std::uint64_t kMaxExactInterferenceCodewords = 64;

// m codewords of length n stored row-major. Rows are normalized to
// (1/n)‖x‖² = 1 unless constructed with normalize = false.
class Codebook {
public:
    static Codebook from_words(std::size_t n, std::vector<double> words, std::uint64_t seed = 0,
                               bool normalize = true);

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return m_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double rate() const noexcept;  // ln(m)/n nats

    std::span<const double> word(std::size_t k) const noexcept { return {words_.data() + k * n_, n_}; }
    std::span<const double> words() const noexcept { return words_; }
    double squared_norm(std::size_t k) const noexcept { return norms_[k]; }

private:
    Codebook() = default;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<double> words_;
    std::vector<double> norms_;
};

// round(exp(rate·n)); throws CapExceeded past the caps and InvalidArgument
// when fewer than two codewords result.
std::uint64_t codebook_size(std::size_t n, double rate_nats);

// I.i.d. standard normal entries (stream seed, row), each row rescaled to unit
// per-component power.
Codebook random_gaussian_codebook(std::size_t n, double rate_nats, std::uint64_t seed);

// Softmax of -½‖y - √snr·word_k‖² under a uniform prior.
std::vector<double> posterior(const Codebook& cb, std::span<const double> y, double snr);

struct McOptions {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
};

// Per-component MMSE (1/n)E‖x - E[x|y]‖² at SNR snr.
MonteCarloEstimate empirical_mmse_x(const Codebook& cb, double snr, const McOptions& options);

struct EstimatorReport {
    MonteCarloEstimate mmse_opt;            // (1/n)E‖x - E[x|y]‖²
    MonteCarloEstimate mse_bitwise_linear;  // (1/n)E‖x - c·y‖², c = √snr/(1+snr)
    MonteCarloEstimate gap;                 // (1/n)E‖E[x|y] - c·y‖²
};

EstimatorReport estimator_gap(const Codebook& cb, double snr, const McOptions& options);

// How E[z|y] is formed inside w_decomposition.
enum class InterferenceEstimator {
    gaussian_approx,  // x-contribution treated as N(0, γ·snr₁) per component
    exact,            // mixes over codewords; needs m ≤ 64
};

// Terms of the per-component MSE of
//   ŵ = √γ·snr₁/(1+γ·snr₁)·y + √(a·snr₂)/(1+γ·snr₁)·E[z|y]
// with w - ŵ = A + B, A = √snr₁·x - √γ·snr₁/(1+γ·snr₁)·(y - √(γ·a·snr₂)·z),
// B = √(a·snr₂)/(1+γ·snr₁)·(z - E[z|y]).
struct DecompositionReport {
    MonteCarloEstimate total;     // (1/n)E‖w - ŵ‖²
    MonteCarloEstimate term1;     // (1/n)E‖A‖²
    MonteCarloEstimate term2;     // (1/n)E‖B‖²
    MonteCarloEstimate cross1;    // (1/n)E⟨A, B⟩
    MonteCarloEstimate cross2;    // (1/n)E⟨B, A⟩
    MonteCarloEstimate residual;  // total - (term1 + term2 + cross1 + cross2), per sample
    double limit_total = 0.0;     // mmse_w(z, γ, p)
    InterferenceEstimator estimator = InterferenceEstimator::gaussian_approx;
};

DecompositionReport w_decomposition(const Codebook& cb_x, const ScalarDistribution& z, double gamma,
                                    const InterferenceParams& p, const McOptions& options,
                                    InterferenceEstimator estimator = InterferenceEstimator::gaussian_approx);

enum class TestFunction { identity, square, clipped_cube };

inline constexpr double kCubeClip = 3.0;

// g applied per component of y; clipped_cube is clamp(y, -3, 3)³.
double apply_test_function(TestFunction g, double y) noexcept;

enum class EstimatorKind { optimal, bitwise_linear };

// (1/n)E Σ_i (x_i - x̂_i)·g(y_i); zero for the optimal estimator.
MonteCarloEstimate orthogonality_residual(const Codebook& cb, double snr, TestFunction g, const McOptions& options,
                                          EstimatorKind estimator = EstimatorKind::optimal);

struct CovarianceTrace {
    double second_moment;  // (1/n)Σ_i mean_k x_{k,i}²
    double central;        // second_moment - (1/n)Σ_i (mean_k x_{k,i})²
};

CovarianceTrace empirical_covariance_trace(const Codebook& cb);

}  // namespace giclab
