#include "giclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "giclab/error.hpp"

namespace giclab {

namespace {

// Implicit QL on a symmetric tridiagonal matrix (diag d, off-diagonal e with
// e[i] coupling rows i and i+1). z receives the first row of the eigenvector
// matrix.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw ConvergenceFailure("Gauss-Hermite eigen-solve did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

struct Interval {
    double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const std::function<double(double)>& f, const Interval& iv, double tol, int depth) {
    const double m = 0.5 * (iv.a + iv.b);
    const double lm = 0.5 * (iv.a + m);
    const double rm = 0.5 * (m + iv.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(iv.a, m, iv.fa, flm, iv.fm);
    const double right = simpson(m, iv.b, iv.fm, frm, iv.fb);
    const double delta = left + right - iv.whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) {
        throw ConvergenceFailure("adaptive Simpson: maximum depth reached near x=" + std::to_string(m));
    }
    return recurse(f, {iv.a, m, iv.fa, flm, iv.fm, left}, 0.5 * tol, depth - 1) +
           recurse(f, {m, iv.b, iv.fm, frm, iv.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

GaussHermiteRule compute_gauss_hermite(int order) {
    if (order < 2 || order > kMaxHermiteOrder) {
        throw InvalidArgument("Gauss-Hermite order must be in [2, 2048]");
    }
    const auto n = static_cast<std::size_t>(order);
    std::vector<double> d(n, 0.0);
    std::vector<double> e(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) e[k] = std::sqrt(0.5 * static_cast<double>(k + 1));
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    tridiagonal_ql(d, e, z);

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mu0 = std::sqrt(std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = d[idx[i]];
        rule.weights[i] = mu0 * z[idx[i]] * z[idx[i]];
    }
    // Enforce the symmetry of the exact rule.
    for (std::size_t i = 0; i < n / 2; ++i) {
        const std::size_t j = n - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

const GaussHermiteRule& gauss_hermite(int order) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const GaussHermiteRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, std::make_unique<const GaussHermiteRule>(compute_gauss_hermite(order))).first;
    }
    return *it->second;
}

double adaptive_simpson(const std::function<double(double)>& f, std::span<const double> knots,
                        const SimpsonOptions& options) {
    if (knots.size() < 2) throw InvalidArgument("adaptive_simpson: need at least two knots");
    if (!(options.abs_tol > 0.0)) throw InvalidArgument("adaptive_simpson: abs_tol must be > 0");
    const double span = knots.back() - knots.front();
    if (span == 0.0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        const double a = knots[i - 1];
        const double b = knots[i];
        if (b < a) throw InvalidArgument("adaptive_simpson: knots must be nondecreasing");
        if (b == a) continue;
        const double tol = options.abs_tol * (b - a) / span;
        const double fa = f(a);
        const double fb = f(b);
        const double fm = f(0.5 * (a + b));
        total += recurse(f, {a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)}, tol, options.max_depth);
    }
    return total;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const SimpsonOptions& options) {
    const double knots[2] = {a, b};
    return adaptive_simpson(f, knots, options);
}

}  // namespace giclab
