#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "giclab/dists.hpp"
#include "giclab/montecarlo.hpp"

namespace giclab {

// Gauss-Hermite settings. With adaptive_refine the order grows
// 129 → 257 → 513 → 1025 → 2048 until successive results differ by < abs_tol.
struct QuadratureSpec {
    int order = 129;
    bool adaptive_refine = true;
    double abs_tol = 1e-10;

    void validate() const;
};

// Bayes posterior of X given Y = √snr·X + N (N standard normal) for a fixed
// law and SNR. Each Gaussian atom contributes a log-domain weight and a linear
// per-atom estimate, so discrete, Gaussian and mixture inputs share one path.
class ScalarPosterior {
public:
    ScalarPosterior(const ScalarDistribution& d, double snr);

    double snr() const noexcept { return snr_; }

    // E[X | Y = y].
    double mean(double y) const;

    // ln p(y) + ½ln(2π): log output density without its constant.
    double log_density(double y) const;

    struct Atom {
        double log_weight;  // ln w - ln s
        double weight;
        double x_mean;
        double y_mean;      // √snr·μ
        double y_std;       // √(1 + snr·v)
        double gain;        // √snr·v / (1 + snr·v)
        double posterior_variance;  // v / (1 + snr·v)
    };
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }

private:
    double snr_;
    std::vector<Atom> atoms_;
};

// E[X | √snr·X + N = y]. Throws NumericOverflow when snr·max|point|² leaves
// the representable range.
double conditional_mean(const ScalarDistribution& d, double snr, double y);

// E[(X - E[X|Y])²]. Gaussian inputs use v/(1+snr·v); snr = 0 returns the
// variance; everything else goes through mmse_quadrature.
double mmse(const ScalarDistribution& d, double snr, const QuadratureSpec& q = {});

// Quadrature path with no closed-form shortcut:
//   Σ_k w_k [v_k/(1+snr·v_k) + E_k(μ_k(Y) - E[X|Y])²],
// each inner expectation a Gauss-Hermite rule centred on the atom's output law.
double mmse_quadrature(const ScalarDistribution& d, double snr, const QuadratureSpec& q = {});

// Monte Carlo oracle: mean of (x - conditional_mean(y))² over seeded draws.
MonteCarloEstimate mmse_monte_carlo(const ScalarDistribution& d, double snr, std::uint64_t samples,
                                    std::uint64_t seed, int threads = 0);

// Runs eval(order) along the refinement ladder of q; throws ConvergenceFailure
// if the ladder is exhausted above q.abs_tol.
double refine_quadrature(const QuadratureSpec& q, const std::function<double(int)>& eval,
                         const char* what);

}  // namespace giclab
