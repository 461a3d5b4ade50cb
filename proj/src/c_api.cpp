#include "giclab.h"

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <new>
#include <string>

#include "giclab/dists.hpp"
#include "giclab/dists_json.hpp"
#include "giclab/error.hpp"
#include "giclab/immse.hpp"
#include "giclab/interference.hpp"
#include "giclab/mmse.hpp"
#include "giclab/simulator.hpp"

struct giclab_dist {
    giclab::ScalarDistribution value;
};

struct giclab_codebook {
    giclab::Codebook value;
};

namespace {

thread_local std::string last_error;

template <class F>
giclab_status guard(F&& f) noexcept {
    try {
        f();
        last_error.clear();
        return GICLAB_OK;
    } catch (const giclab::Error& e) {
        last_error = e.what();
        return static_cast<giclab_status>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return GICLAB_E_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return GICLAB_E_INTERNAL;
    } catch (...) {
        last_error = "unknown exception";
        return GICLAB_E_INTERNAL;
    }
}

giclab_status null_arg(const char* what) noexcept {
    last_error = std::string("null pointer: ") + what;
    return GICLAB_E_NULL;
}

#define GICLAB_REQUIRE(ptr) \
    if (!(ptr)) return null_arg(#ptr)

giclab::QuadratureSpec spec(const giclab_quadrature* q) {
    giclab::QuadratureSpec s;
    if (q) {
        s.order = q->order;
        s.adaptive_refine = q->adaptive_refine != 0;
        s.abs_tol = q->abs_tol;
    }
    s.validate();
    return s;
}

giclab::InterferenceParams params(const giclab_interference_params* p) {
    giclab::InterferenceParams out{p->snr1, p->snr2, p->a, p->b};
    return out;
}

giclab::McOptions options(const giclab_mc_options* o) {
    giclab::McOptions out;
    if (o) {
        out.samples = o->samples;
        out.seed = o->seed;
        out.threads = o->threads;
    }
    return out;
}

giclab_mc_estimate estimate(const giclab::MonteCarloEstimate& e) {
    return {e.value, e.std_error, e.samples, e.seed};
}

giclab_rate_pair pair(const giclab::RatePair& r) { return {r.rx, r.rz}; }

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

giclab_status make_dist(giclab::ScalarDistribution d, giclab_dist** out) {
    *out = new giclab_dist{std::move(d)};
    return GICLAB_OK;
}

}  // namespace

extern "C" {

const char* giclab_last_error(void) { return last_error.c_str(); }

const char* giclab_status_string(giclab_status status) {
    switch (status) {
        case GICLAB_OK: return "ok";
        case GICLAB_E_NULL: return "null_pointer";
        default: break;
    }
    if (status >= GICLAB_E_INVALID_ARGUMENT && status <= GICLAB_E_INTERNAL) {
        return giclab::to_string(static_cast<giclab::ErrorCode>(status));
    }
    return "unknown";
}

const char* giclab_version(void) { return "0.1.0"; }

void giclab_set_warning_callback(giclab_warning_fn fn, void* user) {
    if (!fn) {
        giclab::set_warning_handler(nullptr);
        return;
    }
    giclab::set_warning_handler([fn, user](const std::string& m) { fn(m.c_str(), user); });
}

void giclab_string_free(char* s) { std::free(s); }

giclab_status giclab_dist_gaussian(double mean, double variance, giclab_dist** out) {
    GICLAB_REQUIRE(out);
    return guard([&] { make_dist(giclab::ScalarDistribution::gaussian(mean, variance), out); });
}

giclab_status giclab_dist_discrete(const double* points, const double* probs, size_t count, giclab_dist** out) {
    GICLAB_REQUIRE(out);
    if (count > 0) {
        GICLAB_REQUIRE(points);
        GICLAB_REQUIRE(probs);
    }
    return guard([&] {
        std::vector<double> pts(points, points + count), ps(probs, probs + count);
        make_dist(giclab::ScalarDistribution::discrete(std::move(pts), std::move(ps)), out);
    });
}

giclab_status giclab_dist_mixture(const double* weights, const giclab_dist* const* components, size_t count,
                                  giclab_dist** out) {
    GICLAB_REQUIRE(out);
    if (count > 0) {
        GICLAB_REQUIRE(weights);
        GICLAB_REQUIRE(components);
        for (size_t k = 0; k < count; ++k) GICLAB_REQUIRE(components[k]);
    }
    return guard([&] {
        std::vector<giclab::MixtureComponent> comps;
        comps.reserve(count);
        for (size_t k = 0; k < count; ++k) comps.push_back({weights[k], components[k]->value});
        make_dist(giclab::ScalarDistribution::mixture(std::move(comps)), out);
    });
}

giclab_status giclab_dist_preset(const char* name, giclab_dist** out) {
    GICLAB_REQUIRE(name);
    GICLAB_REQUIRE(out);
    return guard([&] {
        auto d = giclab::preset(name);
        if (!d) throw giclab::ConfigError(std::string("unknown distribution preset '") + name + "'");
        make_dist(*d, out);
    });
}

giclab_status giclab_dist_parse(const char* text, giclab_dist** out) {
    GICLAB_REQUIRE(text);
    GICLAB_REQUIRE(out);
    return guard([&] { make_dist(giclab::parse_distribution(text), out); });
}

giclab_status giclab_dist_to_json(const giclab_dist* d, char** out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = duplicate(giclab::to_json(d->value).dump()); });
}

giclab_status giclab_dist_normalized(const giclab_dist* d, giclab_dist** out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { make_dist(giclab::normalized_to_unit_variance(d->value), out); });
}

void giclab_dist_free(giclab_dist* d) { delete d; }

giclab_status giclab_dist_mean(const giclab_dist* d, double* out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = d->value.mean(); });
}

giclab_status giclab_dist_variance(const giclab_dist* d, double* out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = d->value.variance(); });
}

giclab_status giclab_dist_entropy(const giclab_dist* d, double* out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::entropy_discrete(d->value); });
}

giclab_status giclab_dist_min_spacing(const giclab_dist* d, double* out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::min_point_spacing(d->value); });
}

void giclab_quadrature_default(giclab_quadrature* q) {
    if (!q) return;
    const giclab::QuadratureSpec s;
    q->order = s.order;
    q->adaptive_refine = s.adaptive_refine ? 1 : 0;
    q->abs_tol = s.abs_tol;
}

giclab_status giclab_conditional_mean(const giclab_dist* d, double snr, double y, double* out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::conditional_mean(d->value, snr, y); });
}

giclab_status giclab_mmse(const giclab_dist* d, double snr, const giclab_quadrature* q, double* out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::mmse(d->value, snr, spec(q)); });
}

giclab_status giclab_mmse_quadrature(const giclab_dist* d, double snr, const giclab_quadrature* q, double* out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::mmse_quadrature(d->value, snr, spec(q)); });
}

giclab_status giclab_mmse_monte_carlo(const giclab_dist* d, double snr, uint64_t samples, uint64_t seed,
                                      int threads, giclab_mc_estimate* out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = estimate(giclab::mmse_monte_carlo(d->value, snr, samples, seed, threads)); });
}

giclab_status giclab_mutual_information(const giclab_dist* d, double snr, const giclab_quadrature* q,
                                        double* out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::mutual_information(d->value, snr, spec(q)); });
}

giclab_status giclab_mutual_information_integrated(const giclab_dist* d, double snr, const giclab_quadrature* q,
                                                   double* out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::mutual_information_integrated(d->value, snr, spec(q)); });
}

giclab_status giclab_mutual_information_direct(const giclab_dist* d, double snr, const giclab_quadrature* q,
                                               double* out) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::mutual_information_direct(d->value, snr, spec(q)); });
}

giclab_status giclab_good_code_mi(double design_snr, double gamma, double* out) {
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::good_code_mi(giclab::GoodCodeProfile(design_snr), gamma); });
}

giclab_status giclab_good_code_mmse(double design_snr, double gamma, double* out) {
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::good_code_mmse(giclab::GoodCodeProfile(design_snr), gamma); });
}

giclab_status giclab_verify_immse(const giclab_dist* d, double snr_max, int grid, double tol,
                                  const giclab_quadrature* q, giclab_immse_report* report,
                                  giclab_immse_point* points, size_t capacity) {
    GICLAB_REQUIRE(d);
    GICLAB_REQUIRE(report);
    return guard([&] {
        const auto r = giclab::verify_immse(d->value, snr_max, grid, tol, spec(q));
        report->count = r.points.size();
        report->max_abs_error = r.max_abs_error;
        report->worst_snr = r.worst_snr;
        report->tolerance = r.tolerance;
        report->step = r.step;
        report->pass = r.pass ? 1 : 0;
        if (points) {
            for (size_t i = 0; i < r.points.size() && i < capacity; ++i) {
                const auto& p = r.points[i];
                points[i] = {p.snr, p.derivative, p.half_mmse, p.abs_error};
            }
        }
    });
}

giclab_status giclab_max_trace_mmse_spectrum(int n, double gamma, double trace_budget, double* out) {
    GICLAB_REQUIRE(out);
    return guard([&] {
        const auto lambda = giclab::max_trace_mmse_spectrum(n, gamma, trace_budget);
        std::copy(lambda.begin(), lambda.end(), out);
    });
}

giclab_status giclab_effective_snr(double gamma, const giclab_interference_params* p, double* out) {
    GICLAB_REQUIRE(p);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::effective_snr(gamma, params(p)); });
}

giclab_status giclab_interference_mi(const giclab_dist* z, double gamma, const giclab_interference_params* p,
                                     const giclab_quadrature* q, double* out) {
    GICLAB_REQUIRE(z);
    GICLAB_REQUIRE(p);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::interference_mi(z->value, gamma, params(p), spec(q)); });
}

giclab_status giclab_interference_mi_derivative(const giclab_dist* z, double gamma,
                                                const giclab_interference_params* p, const giclab_quadrature* q,
                                                double* out) {
    GICLAB_REQUIRE(z);
    GICLAB_REQUIRE(p);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::interference_mi_derivative(z->value, gamma, params(p), spec(q)); });
}

giclab_status giclab_chain_rule_check(const giclab_dist* z, double gamma, const giclab_interference_params* p,
                                      double tol, giclab_chain_rule_report* out) {
    GICLAB_REQUIRE(z);
    GICLAB_REQUIRE(p);
    GICLAB_REQUIRE(out);
    return guard([&] {
        const auto r = giclab::chain_rule_check(z->value, gamma, params(p), tol);
        *out = {r.via_interference, r.via_joint, r.gap, r.tolerance, r.pass ? 1 : 0};
    });
}

giclab_status giclab_mmse_w(const giclab_dist* z, double gamma, const giclab_interference_params* p,
                            const giclab_quadrature* q, double* out) {
    GICLAB_REQUIRE(z);
    GICLAB_REQUIRE(p);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::mmse_w(z->value, gamma, params(p), spec(q)); });
}

giclab_status giclab_zero_mmse_threshold(const giclab_interference_params* p, double* out) {
    GICLAB_REQUIRE(p);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = giclab::zero_mmse_threshold(params(p)); });
}

giclab_status giclab_corner_point_z(const giclab_interference_params* p, giclab_rate_pair* out) {
    GICLAB_REQUIRE(p);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = pair(giclab::corner_point_z(params(p))); });
}

giclab_status giclab_corner_points_weak(const giclab_interference_params* p, giclab_rate_pair* first,
                                        giclab_rate_pair* second) {
    GICLAB_REQUIRE(p);
    GICLAB_REQUIRE(first);
    GICLAB_REQUIRE(second);
    return guard([&] {
        const auto r = giclab::corner_points_weak(params(p));
        *first = pair(r.first);
        *second = pair(r.second);
    });
}

giclab_status giclab_corner_point_mixed(const giclab_interference_params* p, giclab_rate_pair* corner,
                                        giclab_rate_pair* mac_bound) {
    GICLAB_REQUIRE(p);
    GICLAB_REQUIRE(corner);
    GICLAB_REQUIRE(mac_bound);
    return guard([&] {
        const auto r = giclab::corner_point_mixed(params(p));
        *corner = pair(r.corner);
        *mac_bound = pair(r.mac_bound);
    });
}

giclab_status giclab_tin_b_interval(const giclab_interference_params* p, int* exists, double* lo, double* hi) {
    GICLAB_REQUIRE(p);
    GICLAB_REQUIRE(exists);
    GICLAB_REQUIRE(lo);
    GICLAB_REQUIRE(hi);
    return guard([&] {
        const auto r = giclab::tin_b_interval(params(p));
        *exists = r ? 1 : 0;
        *lo = r ? r->lo : 0.0;
        *hi = r ? r->hi : 0.0;
    });
}

void giclab_mc_options_default(giclab_mc_options* o) {
    if (!o) return;
    const giclab::McOptions d;
    o->samples = d.samples;
    o->seed = d.seed;
    o->threads = d.threads;
}

giclab_status giclab_codebook_size(size_t n, double rate_nats, uint64_t* m) {
    GICLAB_REQUIRE(m);
    return guard([&] { *m = giclab::codebook_size(n, rate_nats); });
}

giclab_status giclab_codebook_random(size_t n, double rate_nats, uint64_t seed, giclab_codebook** out) {
    GICLAB_REQUIRE(out);
    return guard([&] { *out = new giclab_codebook{giclab::random_gaussian_codebook(n, rate_nats, seed)}; });
}

giclab_status giclab_codebook_from_words(size_t n, const double* words, size_t count, uint64_t seed,
                                         int normalize, giclab_codebook** out) {
    GICLAB_REQUIRE(out);
    if (count > 0) GICLAB_REQUIRE(words);
    return guard([&] {
        std::vector<double> w(words, words + count);
        *out = new giclab_codebook{giclab::Codebook::from_words(n, std::move(w), seed, normalize != 0)};
    });
}

void giclab_codebook_free(giclab_codebook* cb) { delete cb; }

size_t giclab_codebook_n(const giclab_codebook* cb) { return cb ? cb->value.n() : 0; }

size_t giclab_codebook_m(const giclab_codebook* cb) { return cb ? cb->value.m() : 0; }

double giclab_codebook_rate(const giclab_codebook* cb) { return cb ? cb->value.rate() : 0.0; }

giclab_status giclab_codebook_word(const giclab_codebook* cb, size_t k, double* out) {
    GICLAB_REQUIRE(cb);
    GICLAB_REQUIRE(out);
    return guard([&] {
        if (k >= cb->value.m()) throw giclab::InvalidArgument("codeword index out of range");
        const auto w = cb->value.word(k);
        std::copy(w.begin(), w.end(), out);
    });
}

giclab_status giclab_covariance_trace(const giclab_codebook* cb, double* second_moment, double* central) {
    GICLAB_REQUIRE(cb);
    GICLAB_REQUIRE(second_moment);
    GICLAB_REQUIRE(central);
    return guard([&] {
        const auto t = giclab::empirical_covariance_trace(cb->value);
        *second_moment = t.second_moment;
        *central = t.central;
    });
}

giclab_status giclab_posterior(const giclab_codebook* cb, const double* y, size_t len, double snr, double* out) {
    GICLAB_REQUIRE(cb);
    GICLAB_REQUIRE(y);
    GICLAB_REQUIRE(out);
    return guard([&] {
        const auto p = giclab::posterior(cb->value, std::span<const double>(y, len), snr);
        std::copy(p.begin(), p.end(), out);
    });
}

giclab_status giclab_empirical_mmse_x(const giclab_codebook* cb, double snr, const giclab_mc_options* o,
                                      giclab_mc_estimate* out) {
    GICLAB_REQUIRE(cb);
    GICLAB_REQUIRE(out);
    return guard([&] { *out = estimate(giclab::empirical_mmse_x(cb->value, snr, options(o))); });
}

giclab_status giclab_estimator_gap(const giclab_codebook* cb, double snr, const giclab_mc_options* o,
                                   giclab_estimator_report* out) {
    GICLAB_REQUIRE(cb);
    GICLAB_REQUIRE(out);
    return guard([&] {
        const auto r = giclab::estimator_gap(cb->value, snr, options(o));
        *out = {estimate(r.mmse_opt), estimate(r.mse_bitwise_linear), estimate(r.gap)};
    });
}

giclab_status giclab_w_decomposition(const giclab_codebook* cb, const giclab_dist* z, double gamma,
                                     const giclab_interference_params* p, const giclab_mc_options* o,
                                     giclab_z_estimator estimator, giclab_decomposition_report* out) {
    GICLAB_REQUIRE(cb);
    GICLAB_REQUIRE(z);
    GICLAB_REQUIRE(p);
    GICLAB_REQUIRE(out);
    return guard([&] {
        if (estimator != GICLAB_Z_GAUSSIAN_APPROX && estimator != GICLAB_Z_EXACT) {
            throw giclab::InvalidArgument("unknown interference estimator");
        }
        const auto kind = estimator == GICLAB_Z_EXACT ? giclab::InterferenceEstimator::exact
                                                      : giclab::InterferenceEstimator::gaussian_approx;
        const auto r = giclab::w_decomposition(cb->value, z->value, gamma, params(p), options(o), kind);
        *out = {estimate(r.total), estimate(r.term1),    estimate(r.term2),
                estimate(r.cross1), estimate(r.cross2), estimate(r.residual), r.limit_total};
    });
}

giclab_status giclab_orthogonality_residual(const giclab_codebook* cb, double snr, giclab_test_function g,
                                            const giclab_mc_options* o, giclab_estimator estimator,
                                            giclab_mc_estimate* out) {
    GICLAB_REQUIRE(cb);
    GICLAB_REQUIRE(out);
    return guard([&] {
        if (g < GICLAB_G_IDENTITY || g > GICLAB_G_CLIPPED_CUBE) throw giclab::InvalidArgument("unknown test function");
        if (estimator != GICLAB_EST_OPTIMAL && estimator != GICLAB_EST_BITWISE_LINEAR) {
            throw giclab::InvalidArgument("unknown estimator");
        }
        const auto kind = estimator == GICLAB_EST_OPTIMAL ? giclab::EstimatorKind::optimal
                                                          : giclab::EstimatorKind::bitwise_linear;
        *out = estimate(giclab::orthogonality_residual(cb->value, snr, static_cast<giclab::TestFunction>(g),
                                                       options(o), kind));
    });
}

}  // extern "C"
