#pragma once

#include <functional>
#include <span>
#include <vector>

namespace giclab {

// Nodes and weights for ∫ e^{-t²} f(t) dt ≈ Σ w_i f(t_i). Nodes ascending.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline constexpr int kMaxHermiteOrder = 2048;

// Golub-Welsch on the Hermite Jacobi matrix, tracking only the first
// eigenvector components (O(order²)). Tables are cached and shared read-only.
const GaussHermiteRule& gauss_hermite(int order);

// Computes a rule without touching the cache.
GaussHermiteRule compute_gauss_hermite(int order);

struct SimpsonOptions {
    double abs_tol = 1e-9;
    int max_depth = 40;
};

// Adaptive Simpson with Richardson correction over [knots[0], knots.back()],
// treating each interior knot as a mandatory breakpoint. The tolerance is
// split across knot intervals in proportion to their length. Knots must be
// nondecreasing. Throws ConvergenceFailure if max_depth is exhausted.
double adaptive_simpson(const std::function<double(double)>& f, std::span<const double> knots,
                        const SimpsonOptions& options = {});

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const SimpsonOptions& options = {});

}  // namespace giclab
