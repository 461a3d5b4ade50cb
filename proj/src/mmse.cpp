#include "giclab/mmse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "giclab/error.hpp"
#include "giclab/quadrature.hpp"

namespace giclab {

namespace {

constexpr double kExponentSafe = 1e300;

void check_snr(double snr) {
    if (!std::isfinite(snr) || snr < 0.0) throw InvalidArgument("snr must be finite and >= 0");
}

}  // namespace

void QuadratureSpec::validate() const {
    if (order < 2 || order > kMaxHermiteOrder) throw InvalidArgument("quadrature order must be in [2, 2048]");
    if (!(abs_tol > 0.0)) throw InvalidArgument("quadrature abs_tol must be > 0");
}

ScalarPosterior::ScalarPosterior(const ScalarDistribution& d, double snr) : snr_(snr) {
    check_snr(snr);
    const double root = std::sqrt(snr);
    for (const auto& a : d.atoms()) {
        const double reach = snr * std::max(a.mean * a.mean, a.variance);
        if (!(reach <= kExponentSafe)) {
            throw NumericOverflow("snr·max|point|² = " + std::to_string(reach) +
                                  " exceeds the exponent-safe range; rescale the input");
        }
        Atom atom;
        const double sv = snr * a.variance;
        atom.weight = a.weight;
        atom.x_mean = a.mean;
        atom.y_mean = root * a.mean;
        atom.y_std = std::sqrt(1.0 + sv);
        atom.gain = root * a.variance / (1.0 + sv);
        atom.posterior_variance = a.variance / (1.0 + sv);
        atom.log_weight = std::log(a.weight) - std::log(atom.y_std);
        atoms_.push_back(atom);
    }
}

double ScalarPosterior::mean(double y) const {
    if (atoms_.size() == 1) {
        const auto& a = atoms_.front();
        return a.x_mean + a.gain * (y - a.y_mean);
    }
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& a : atoms_) {
        const double u = (y - a.y_mean) / a.y_std;
        top = std::max(top, a.log_weight - 0.5 * u * u);
    }
    double num = 0.0;
    double den = 0.0;
    for (const auto& a : atoms_) {
        const double u = (y - a.y_mean) / a.y_std;
        const double w = std::exp(a.log_weight - 0.5 * u * u - top);
        den += w;
        num += w * (a.x_mean + a.gain * (y - a.y_mean));
    }
    return num / den;
}

double ScalarPosterior::log_density(double y) const {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& a : atoms_) {
        const double u = (y - a.y_mean) / a.y_std;
        top = std::max(top, a.log_weight - 0.5 * u * u);
    }
    double sum = 0.0;
    for (const auto& a : atoms_) {
        const double u = (y - a.y_mean) / a.y_std;
        sum += std::exp(a.log_weight - 0.5 * u * u - top);
    }
    return top + std::log(sum);
}

double conditional_mean(const ScalarDistribution& d, double snr, double y) {
    if (!std::isfinite(y)) throw InvalidArgument("conditional_mean: observation must be finite");
    if (snr == 0.0) return d.mean();
    return ScalarPosterior(d, snr).mean(y);
}

double refine_quadrature(const QuadratureSpec& q, const std::function<double(int)>& eval, const char* what) {
    q.validate();
    int order = q.order;
    double previous = eval(order);
    if (!q.adaptive_refine) return previous;
    double gap = std::numeric_limits<double>::infinity();
    if (order >= kMaxHermiteOrder) {
        gap = std::abs(previous - eval(kMaxHermiteOrder / 2 + 1));
        if (gap < q.abs_tol) return previous;
    }
    while (order < kMaxHermiteOrder) {
        const int next = std::min(kMaxHermiteOrder, order % 2 == 1 ? 2 * order - 1 : 2 * order);
        const double current = eval(next);
        gap = std::abs(current - previous);
        previous = current;
        order = next;
        if (gap < q.abs_tol) return current;
    }
    throw ConvergenceFailure(std::string(what) + ": Gauss-Hermite refinement stalled at order 2048 (last change " +
                             std::to_string(gap) + " >= abs_tol)");
}

double mmse_quadrature(const ScalarDistribution& d, double snr, const QuadratureSpec& q) {
    check_snr(snr);
    if (snr == 0.0) return d.variance();
    const ScalarPosterior post(d, snr);
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    auto eval = [&](int order) {
        const auto& rule = gauss_hermite(order);
        double total = 0.0;
        for (const auto& a : post.atoms()) {
            double spread = 0.0;
            if (post.atoms().size() > 1) {
                const double scale = std::numbers::sqrt2 * a.y_std;
                for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                    const double offset = scale * rule.nodes[j];
                    const double diff = a.x_mean + a.gain * offset - post.mean(a.y_mean + offset);
                    spread += rule.weights[j] * diff * diff;
                }
                spread *= inv_sqrt_pi;
            }
            total += a.weight * (a.posterior_variance + spread);
        }
        return total;
    };
    return refine_quadrature(q, eval, "mmse");
}

double mmse(const ScalarDistribution& d, double snr, const QuadratureSpec& q) {
    check_snr(snr);
    if (snr == 0.0) return d.variance();
    if (d.kind() == ScalarDistribution::Kind::gaussian) {
        const double v = d.gaussian_variance();
        return v / (1.0 + snr * v);
    }
    return mmse_quadrature(d, snr, q);
}

MonteCarloEstimate mmse_monte_carlo(const ScalarDistribution& d, double snr, std::uint64_t samples,
                                    std::uint64_t seed, int threads) {
    check_snr(snr);
    if (samples < 1000) throw InvalidArgument("mmse_monte_carlo: samples must be >= 1000");
    const ScalarPosterior post(d, snr);
    const double root = std::sqrt(snr);
    auto kernel = [&](std::uint64_t index, std::span<double> out) {
        RandomStream stream(seed, index);
        const double x = d.sample(stream);
        const double y = root * x + stream.normal();
        const double e = x - post.mean(y);
        out[0] = e * e;
    };
    return run_monte_carlo(samples, 1, seed, threads, kernel).front();
}

}  // namespace giclab
