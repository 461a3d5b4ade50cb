#include "giclab/immse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "giclab/error.hpp"
#include "giclab/quadrature.hpp"

namespace giclab {

namespace {

void check_snr(double snr) {
    if (!std::isfinite(snr) || snr < 0.0) throw InvalidArgument("snr must be finite and >= 0");
}

void check_gamma(double gamma) {
    if (!std::isfinite(gamma) || gamma < 0.0) throw InvalidArgument("gamma must be finite and >= 0");
}

}  // namespace

GoodCodeProfile::GoodCodeProfile(double design_snr) : design_snr_(design_snr) {
    if (!std::isfinite(design_snr) || design_snr <= 0.0) {
        throw InvalidArgument("design_snr must be finite and > 0");
    }
}

const char* to_string(CurveKind kind) noexcept {
    switch (kind) {
        case CurveKind::mutual_information_nats: return "mutual_information_nats";
        case CurveKind::mutual_information_bits: return "mutual_information_bits";
        case CurveKind::mmse: return "mmse";
        case CurveKind::derivative_nats: return "mi_derivative_nats";
        case CurveKind::derivative_bits: return "mi_derivative_bits";
    }
    return "unknown";
}

void write_curve_csv(std::ostream& out, std::span<const CurveSample> samples) {
    out << "x,y,kind\n";
    char buf[96];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", s.abscissa, s.value);
        out << buf << to_string(s.kind) << '\n';
    }
}

double mutual_information_integrated(const ScalarDistribution& d, double snr, const QuadratureSpec& q) {
    check_snr(snr);
    if (snr == 0.0) return 0.0;
    auto half_mmse = [&](double g) { return 0.5 * mmse_quadrature(d, g, q); };
    return adaptive_simpson(half_mmse, 0.0, snr, SimpsonOptions{1e-9, 40});
}

double mutual_information(const ScalarDistribution& d, double snr, const QuadratureSpec& q) {
    check_snr(snr);
    if (snr == 0.0) return 0.0;
    if (d.kind() == ScalarDistribution::Kind::gaussian) {
        return 0.5 * std::log1p(snr * d.gaussian_variance());
    }
    return mutual_information_integrated(d, snr, q);
}

double mutual_information_direct(const ScalarDistribution& d, double snr, const QuadratureSpec& q) {
    check_snr(snr);
    if (snr == 0.0) return 0.0;
    const ScalarPosterior post(d, snr);
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    auto eval = [&](int order) {
        const auto& rule = gauss_hermite(order);
        double total = 0.0;
        for (const auto& a : post.atoms()) {
            const double log_s = std::log(a.y_std);
            const double scale = std::numbers::sqrt2 * a.y_std;
            // E_k ln(p(Y) / N_k(Y)); exactly ln 1 = 0 for a lone atom.
            double excess = 0.0;
            if (post.atoms().size() > 1) {
                for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                    const double t = rule.nodes[j];
                    excess += rule.weights[j] * (post.log_density(a.y_mean + scale * t) + log_s + t * t);
                }
                excess *= inv_sqrt_pi;
            } else {
                excess = 0.0;
            }
            total += a.weight * (log_s - excess);
        }
        return total;
    };
    return refine_quadrature(q, eval, "mutual_information_direct");
}

double good_code_mi(const GoodCodeProfile& profile, double gamma) {
    check_gamma(gamma);
    return 0.5 * std::log1p(std::min(gamma, 1.0) * profile.design_snr());
}

double good_code_mmse(const GoodCodeProfile& profile, double gamma) {
    check_gamma(gamma);
    if (gamma >= 1.0) return 0.0;
    return 1.0 / (1.0 + gamma * profile.design_snr());
}

std::vector<CurveSample> good_code_curve(const GoodCodeProfile& profile, double start, double stop, int points) {
    if (!(start <= stop) || start < 0.0 || points < 2) {
        throw InvalidArgument("good_code_curve: need 0 <= start <= stop and points >= 2");
    }
    std::vector<CurveSample> out;
    out.reserve(2 * static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double g = start + (stop - start) * i / (points - 1);
        out.push_back({g, good_code_mi(profile, g), CurveKind::mutual_information_nats});
    }
    for (int i = 0; i < points; ++i) {
        const double g = start + (stop - start) * i / (points - 1);
        out.push_back({g, good_code_mmse(profile, g), CurveKind::mmse});
    }
    return out;
}

ImmseReport verify_immse(const ScalarDistribution& d, double snr_max, int grid, double tol,
                         const QuadratureSpec& q) {
    if (grid < 10) throw InvalidArgument("verify_immse: grid must be >= 10");
    if (!std::isfinite(snr_max) || snr_max <= 0.0) throw InvalidArgument("verify_immse: snr_max must be > 0");
    if (!(tol > 0.0)) throw InvalidArgument("verify_immse: tol must be > 0");
    ImmseReport report;
    report.tolerance = tol;
    const double spacing = snr_max / (grid - 1);
    report.step = std::min(1e-3, 0.5 * spacing);
    const double h = report.step;
    for (int i = 1; i < grid; ++i) {
        const double s = spacing * i;
        ImmsePoint p;
        p.snr = s;
        p.derivative = (mutual_information_direct(d, s + h, q) - mutual_information_direct(d, s - h, q)) / (2.0 * h);
        p.half_mmse = 0.5 * mmse(d, s, q);
        p.abs_error = std::abs(p.derivative - p.half_mmse);
        if (p.abs_error > report.max_abs_error) {
            report.max_abs_error = p.abs_error;
            report.worst_snr = s;
        }
        report.points.push_back(p);
    }
    report.pass = report.max_abs_error < tol;
    return report;
}

std::vector<double> project_capped_simplex(std::span<const double> v, double total) {
    std::vector<double> out(v.begin(), v.end());
    double sum = 0.0;
    for (double& x : out) {
        x = std::max(0.0, x);
        sum += x;
    }
    if (sum <= total) return out;
    // Projection onto {λ ≥ 0, Σλ = total}: λ = max(v - τ, 0).
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double running = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        running += sorted[k];
        const double candidate = (running - total) / static_cast<double>(k + 1);
        if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
            tau = candidate;
            break;
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(0.0, v[i] - tau);
    return out;
}

std::vector<double> max_trace_mmse_spectrum(int n, double gamma, double trace_budget) {
    if (n < 2 || n > 64) throw InvalidArgument("max_trace_mmse_spectrum: n must be in [2, 64]");
    if (!std::isfinite(gamma) || gamma <= 0.0) throw InvalidArgument("max_trace_mmse_spectrum: gamma must be > 0");
    if (!std::isfinite(trace_budget) || trace_budget <= 0.0) {
        throw InvalidArgument("max_trace_mmse_spectrum: trace_budget must be > 0");
    }
    const auto size = static_cast<std::size_t>(n);
    const double total = n * trace_budget;
    const double inv_n = 1.0 / n;

    auto objective = [&](const std::vector<double>& l) {
        double f = 0.0;
        for (double x : l) f += x / (1.0 + gamma * x);
        return f * inv_n;
    };
    auto gradient = [&](const std::vector<double>& l) {
        std::vector<double> g(size);
        for (std::size_t i = 0; i < size; ++i) {
            const double t = 1.0 + gamma * l[i];
            g[i] = inv_n / (t * t);
        }
        return g;
    };

    // Deliberately skewed start: λ_i ∝ i + 1, using half of the budget.
    std::vector<double> lambda(size);
    for (std::size_t i = 0; i < size; ++i) lambda[i] = static_cast<double>(i + 1);
    const double start_sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    for (double& x : lambda) x *= 0.5 * total / start_sum;

    std::vector<double> grad = gradient(lambda);
    double f = objective(lambda);
    double step = 1.0 / (2.0 * gamma * inv_n);  // inverse of the largest curvature
    constexpr int kMaxIterations = 10000;

    for (int iter = 0; iter < kMaxIterations; ++iter) {
        // Stationarity: move produced by a step of size ~trace_budget.
        const double gmax = *std::max_element(grad.begin(), grad.end());
        std::vector<double> probe(size);
        for (std::size_t i = 0; i < size; ++i) probe[i] = lambda[i] + trace_budget / gmax * grad[i];
        const auto projected = project_capped_simplex(probe, total);
        double stationarity = 0.0;
        for (std::size_t i = 0; i < size; ++i) stationarity = std::max(stationarity, std::abs(projected[i] - lambda[i]));
        if (stationarity <= 1e-12 * trace_budget) return lambda;

        for (std::size_t i = 0; i < size; ++i) probe[i] = lambda[i] + step * grad[i];
        const auto target = project_capped_simplex(probe, total);
        std::vector<double> dir(size);
        double slope = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            dir[i] = target[i] - lambda[i];
            slope += grad[i] * dir[i];
        }
        double t = 1.0;
        std::vector<double> trial(size);
        double f_trial = f;
        for (int k = 0; k < 60; ++k) {
            for (std::size_t i = 0; i < size; ++i) trial[i] = lambda[i] + t * dir[i];
            f_trial = objective(trial);
            if (f_trial >= f + 1e-4 * t * slope) break;
            t *= 0.5;
        }
        const auto grad_trial = gradient(trial);
        double ss = 0.0;
        double sy = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            const double s = trial[i] - lambda[i];
            ss += s * s;
            sy += s * (grad_trial[i] - grad[i]);
        }
        if (ss == 0.0) return lambda;
        step = sy < 0.0 ? std::clamp(ss / -sy, 1e-12, 1e12) : 1e12;
        lambda = trial;
        grad = grad_trial;
        f = f_trial;
    }
    throw ConvergenceFailure("max_trace_mmse_spectrum: no convergence after 10^4 iterations");
}

}  // namespace giclab
