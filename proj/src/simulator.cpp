#include "giclab/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "giclab/error.hpp"
#include "giclab/mmse.hpp"

namespace giclab {

namespace {

void check_snr(double snr) {
    if (!std::isfinite(snr) || snr < 0.0) throw InvalidArgument("snr must be finite and >= 0");
}

void check_options(const McOptions& o) {
    if (o.samples < 1000) throw InvalidArgument("Monte Carlo runs need samples >= 1000");
}

// Log-domain softmax of -½‖y - √snr·w_k‖² into `post`.
void posterior_into(const Codebook& cb, std::span<const double> y, double snr, std::vector<double>& post) {
    const std::size_t n = cb.n();
    const std::size_t m = cb.m();
    const double root = std::sqrt(snr);
    post.resize(m);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
        const auto w = cb.word(k);
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += y[i] * w[i];
        const double lg = root * dot - 0.5 * snr * cb.squared_norm(k);
        post[k] = lg;
        top = std::max(top, lg);
    }
    double sum = 0.0;
    for (double& p : post) {
        p = std::exp(p - top);
        sum += p;
    }
    for (double& p : post) p /= sum;
}

void posterior_mean(const Codebook& cb, const std::vector<double>& post, std::vector<double>& mean) {
    mean.assign(cb.n(), 0.0);
    for (std::size_t k = 0; k < cb.m(); ++k) {
        const auto w = cb.word(k);
        const double p = post[k];
        for (std::size_t i = 0; i < cb.n(); ++i) mean[i] += p * w[i];
    }
}

// Uniform codeword index, AWGN observation at `snr`.
struct CodewordSample {
    std::size_t index;
    std::vector<double> y;
};

CodewordSample draw_observation(const Codebook& cb, double snr, RandomStream& stream) {
    CodewordSample s;
    s.index = static_cast<std::size_t>(stream.below(cb.m()));
    const auto x = cb.word(s.index);
    const double root = std::sqrt(snr);
    s.y.resize(cb.n());
    for (std::size_t i = 0; i < cb.n(); ++i) s.y[i] = root * x[i] + stream.normal();
    return s;
}

// Σ c_k·v_k with a compensated (TwoProduct/TwoSum) accumulation, rounded once.
template <std::size_t K>
double dot2(const std::array<double, K>& c, const std::array<double, K>& v) {
    double sum = 0.0;
    double err = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double p = c[k] * v[k];
        const double pe = std::fma(c[k], v[k], -p);
        const double t = sum + p;
        const double bp = t - sum;
        err += (sum - (t - bp)) + (p - bp) + pe;
        sum = t;
    }
    return sum + err;
}

}  // namespace

Codebook Codebook::from_words(std::size_t n, std::vector<double> words, std::uint64_t seed, bool normalize) {
    if (n == 0 || n > kMaxBlocklength) throw InvalidArgument("codebook: n must be in [1, 32]");
    if (words.empty() || words.size() % n != 0) {
        throw InvalidArgument("codebook: word storage must be a nonempty multiple of n");
    }
    const std::size_t m = words.size() / n;
    if (m > kMaxCodewords) throw CapExceeded("codebook: more than 2^16 codewords");
    Codebook cb;
    cb.n_ = n;
    cb.m_ = m;
    cb.seed_ = seed;
    cb.norms_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = words[k * n + i];
            if (!std::isfinite(v)) throw InvalidArgument("codebook: entries must be finite");
            norm += v * v;
        }
        if (normalize) {
            if (norm == 0.0) throw InvalidArgument("codebook: cannot normalize an all-zero codeword");
            const double scale = std::sqrt(static_cast<double>(n) / norm);
            norm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                words[k * n + i] *= scale;
                norm += words[k * n + i] * words[k * n + i];
            }
        }
        cb.norms_[k] = norm;
    }
    cb.words_ = std::move(words);
    return cb;
}

double Codebook::rate() const noexcept { return std::log(static_cast<double>(m_)) / static_cast<double>(n_); }

std::uint64_t codebook_size(std::size_t n, double rate_nats) {
    if (n == 0) throw InvalidArgument("codebook: n must be >= 1");
    if (n > kMaxBlocklength) throw CapExceeded("codebook: n = " + std::to_string(n) + " exceeds the cap of 32");
    if (!std::isfinite(rate_nats) || rate_nats <= 0.0) throw InvalidArgument("codebook: rate must be finite and > 0");
    const double exponent = rate_nats * static_cast<double>(n);
    if (exponent > std::log(static_cast<double>(kMaxCodewords)) + 1.0) {
        throw CapExceeded("codebook: exp(rate·n) = exp(" + std::to_string(exponent) + ") exceeds 2^16 codewords");
    }
    const auto m = static_cast<std::uint64_t>(std::llround(std::exp(exponent)));
    if (m < 2) throw InvalidArgument("codebook: rate·n too small, fewer than two codewords");
    if (m > kMaxCodewords) throw CapExceeded("codebook: m = " + std::to_string(m) + " exceeds 2^16");
    if (m * n > kMaxCodebookEntries) {
        throw CapExceeded("codebook: m·n = " + std::to_string(m * n) + " exceeds the exact-posterior cap of 10^4");
    }
    return m;
}

Codebook random_gaussian_codebook(std::size_t n, double rate_nats, std::uint64_t seed) {
    const std::uint64_t m = codebook_size(n, rate_nats);
    std::vector<double> words(static_cast<std::size_t>(m) * n);
    for (std::uint64_t k = 0; k < m; ++k) {
        RandomStream stream(seed, k);
        for (std::size_t i = 0; i < n; ++i) words[k * n + i] = stream.normal();
    }
    return Codebook::from_words(n, std::move(words), seed, true);
}

std::vector<double> posterior(const Codebook& cb, std::span<const double> y, double snr) {
    check_snr(snr);
    if (y.size() != cb.n()) throw InvalidArgument("posterior: observation length differs from n");
    std::vector<double> post;
    posterior_into(cb, y, snr, post);
    return post;
}

MonteCarloEstimate empirical_mmse_x(const Codebook& cb, double snr, const McOptions& options) {
    check_snr(snr);
    check_options(options);
    const double inv_n = 1.0 / static_cast<double>(cb.n());
    auto kernel = [&](std::uint64_t index, std::span<double> out) {
        RandomStream stream(options.seed, index);
        const auto s = draw_observation(cb, snr, stream);
        std::vector<double> post, mean;
        posterior_into(cb, s.y, snr, post);
        posterior_mean(cb, post, mean);
        const auto x = cb.word(s.index);
        double err = 0.0;
        for (std::size_t i = 0; i < cb.n(); ++i) err += (x[i] - mean[i]) * (x[i] - mean[i]);
        out[0] = err * inv_n;
    };
    return run_monte_carlo(options.samples, 1, options.seed, options.threads, kernel).front();
}

EstimatorReport estimator_gap(const Codebook& cb, double snr, const McOptions& options) {
    check_snr(snr);
    check_options(options);
    const double inv_n = 1.0 / static_cast<double>(cb.n());
    const double gain = std::sqrt(snr) / (1.0 + snr);
    auto kernel = [&](std::uint64_t index, std::span<double> out) {
        RandomStream stream(options.seed, index);
        const auto s = draw_observation(cb, snr, stream);
        std::vector<double> post, mean;
        posterior_into(cb, s.y, snr, post);
        posterior_mean(cb, post, mean);
        const auto x = cb.word(s.index);
        double opt = 0.0, lin = 0.0, gap = 0.0;
        for (std::size_t i = 0; i < cb.n(); ++i) {
            const double linear = gain * s.y[i];
            opt += (x[i] - mean[i]) * (x[i] - mean[i]);
            lin += (x[i] - linear) * (x[i] - linear);
            gap += (mean[i] - linear) * (mean[i] - linear);
        }
        out[0] = opt * inv_n;
        out[1] = lin * inv_n;
        out[2] = gap * inv_n;
    };
    const auto r = run_monte_carlo(options.samples, 3, options.seed, options.threads, kernel);
    return {r[0], r[1], r[2]};
}

DecompositionReport w_decomposition(const Codebook& cb, const ScalarDistribution& z, double gamma,
                                    const InterferenceParams& p, const McOptions& options,
                                    InterferenceEstimator estimator) {
    p.validate();
    check_options(options);
    if (!std::isfinite(gamma) || gamma <= 0.0 || gamma >= 1.0) {
        throw InvalidArgument("w_decomposition: gamma must lie in (0, 1)");
    }
    if (estimator == InterferenceEstimator::exact && cb.m() > kMaxExactInterferenceCodewords) {
        throw CapExceeded("w_decomposition: exact interference estimator needs m <= 64 (got " +
                          std::to_string(cb.m()) + ")");
    }
    DecompositionReport report;
    report.estimator = estimator;
    report.limit_total = mmse_w(z, gamma, p);

    ScalarDistribution zu = z;
    if (z.variance() > 0.0 && std::abs(z.variance() - 1.0) > 1e-9) zu = normalized_to_unit_variance(z);

    const std::size_t n = cb.n();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double t = 1.0 + gamma * p.snr1;
    const double root_g = std::sqrt(gamma);
    const double x_amp = std::sqrt(p.snr1);              // √snr₁
    const double z_amp = std::sqrt(p.a * p.snr2);        // √(a·snr₂)
    const double x_obs = root_g * x_amp;                 // √(γ·snr₁)
    const double z_obs = root_g * z_amp;                 // √(γ·a·snr₂)
    const double y_gain = root_g * p.snr1 / t;           // √γ·snr₁/(1+γ·snr₁)
    const double z_gain0 = z_amp / t;                    // √(a·snr₂)/(1+γ·snr₁)
    // z_amp = z_res + z_gain exactly (Sterbenz); z_res stands for y_gain·z_obs.
    const bool gain_major = z_gain0 >= 0.5 * z_amp;
    const double z_res = gain_major ? z_amp - z_gain0 : y_gain * z_obs;
    const double z_gain = gain_major ? z_gain0 : z_amp - z_res;

    // Gaussian approximation: y_i/√(1+γ·snr₁) = √γ'·z_i + unit noise.
    const double eff = gamma * p.a * p.snr2 / t;
    const ScalarPosterior approx(zu, eff);
    const double approx_scale = 1.0 / std::sqrt(t);
    // Exact: given codeword j, y_i - √(γ·snr₁)·x_{j,i} = √(γ·a·snr₂)·z_i + noise.
    const ScalarPosterior given_x(zu, gamma * p.a * p.snr2);

    auto kernel = [&](std::uint64_t index, std::span<double> out) {
        RandomStream stream(options.seed, index);
        const auto k = static_cast<std::size_t>(stream.below(cb.m()));
        const auto x = cb.word(k);
        std::vector<double> zs(n), y(n), zhat(n);
        for (std::size_t i = 0; i < n; ++i) {
            zs[i] = zu.sample(stream);
            y[i] = x_obs * x[i] + z_obs * zs[i] + stream.normal();
        }
        if (estimator == InterferenceEstimator::gaussian_approx) {
            for (std::size_t i = 0; i < n; ++i) zhat[i] = approx.mean(y[i] * approx_scale);
        } else {
            std::vector<double> logw(cb.m());
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < cb.m(); ++j) {
                const auto xj = cb.word(j);
                double lg = 0.0;
                for (std::size_t i = 0; i < n; ++i) lg += given_x.log_density(y[i] - x_obs * xj[i]);
                logw[j] = lg;
                top = std::max(top, lg);
            }
            double sum = 0.0;
            for (double& w : logw) {
                w = std::exp(w - top);
                sum += w;
            }
            std::fill(zhat.begin(), zhat.end(), 0.0);
            for (std::size_t j = 0; j < cb.m(); ++j) {
                const double pj = logw[j] / sum;
                if (pj == 0.0) continue;
                const auto xj = cb.word(j);
                for (std::size_t i = 0; i < n; ++i) zhat[i] += pj * given_x.mean(y[i] - x_obs * xj[i]);
            }
        }
        double total = 0.0, a2 = 0.0, b2 = 0.0, ab = 0.0, ba = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = dot2<4>({x_amp, z_amp, -y_gain, -z_gain}, {x[i], zs[i], y[i], zhat[i]});
            const double a = dot2<3>({x_amp, -y_gain, z_res}, {x[i], y[i], zs[i]});
            const double b = dot2<2>({z_gain, -z_gain}, {zs[i], zhat[i]});
            total += e * e;
            a2 += a * a;
            b2 += b * b;
            ab += a * b;
            ba += b * a;
        }
        out[0] = total * inv_n;
        out[1] = a2 * inv_n;
        out[2] = b2 * inv_n;
        out[3] = ab * inv_n;
        out[4] = ba * inv_n;
        out[5] = out[0] - (out[1] + out[2] + out[3] + out[4]);
    };
    const auto r = run_monte_carlo(options.samples, 6, options.seed, options.threads, kernel);
    report.total = r[0];
    report.term1 = r[1];
    report.term2 = r[2];
    report.cross1 = r[3];
    report.cross2 = r[4];
    report.residual = r[5];
    return report;
}

double apply_test_function(TestFunction g, double y) noexcept {
    switch (g) {
        case TestFunction::identity: return y;
        case TestFunction::square: return y * y;
        case TestFunction::clipped_cube: {
            const double c = std::clamp(y, -kCubeClip, kCubeClip);
            return c * c * c;
        }
    }
    return 0.0;
}

MonteCarloEstimate orthogonality_residual(const Codebook& cb, double snr, TestFunction g, const McOptions& options,
                                          EstimatorKind estimator) {
    check_snr(snr);
    check_options(options);
    const double inv_n = 1.0 / static_cast<double>(cb.n());
    const double gain = std::sqrt(snr) / (1.0 + snr);
    auto kernel = [&](std::uint64_t index, std::span<double> out) {
        RandomStream stream(options.seed, index);
        const auto s = draw_observation(cb, snr, stream);
        std::vector<double> est(cb.n());
        if (estimator == EstimatorKind::optimal) {
            std::vector<double> post;
            posterior_into(cb, s.y, snr, post);
            posterior_mean(cb, post, est);
        } else {
            for (std::size_t i = 0; i < cb.n(); ++i) est[i] = gain * s.y[i];
        }
        const auto x = cb.word(s.index);
        double acc = 0.0;
        for (std::size_t i = 0; i < cb.n(); ++i) acc += (x[i] - est[i]) * apply_test_function(g, s.y[i]);
        out[0] = acc * inv_n;
    };
    return run_monte_carlo(options.samples, 1, options.seed, options.threads, kernel).front();
}

CovarianceTrace empirical_covariance_trace(const Codebook& cb) {
    const std::size_t n = cb.n();
    const double inv_m = 1.0 / static_cast<double>(cb.m());
    std::vector<double> col_mean(n, 0.0);
    double second = 0.0;
    for (std::size_t k = 0; k < cb.m(); ++k) {
        const auto w = cb.word(k);
        for (std::size_t i = 0; i < n; ++i) {
            col_mean[i] += w[i] * inv_m;
            second += w[i] * w[i];
        }
    }
    second *= inv_m / static_cast<double>(n);
    double mean_sq = 0.0;
    for (double c : col_mean) mean_sq += c * c;
    return {second, second - mean_sq / static_cast<double>(n)};
}

}  // namespace giclab
