#ifndef GICLAB_H
#define GICLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GICLAB_BUILDING_LIBRARY)
#    define GICLAB_API __declspec(dllexport)
#  else
#    define GICLAB_API __declspec(dllimport)
#  endif
#else
#  define GICLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum giclab_status {
    GICLAB_OK = 0,
    GICLAB_E_INVALID_ARGUMENT = 1,
    GICLAB_E_CONFIG = 2,
    GICLAB_E_CONVERGENCE = 3,
    GICLAB_E_CAP_EXCEEDED = 4,
    GICLAB_E_NUMERIC_OVERFLOW = 5,
    GICLAB_E_INTERNAL = 6,
    GICLAB_E_NULL = 7
} giclab_status;

typedef struct giclab_dist giclab_dist;
typedef struct giclab_codebook giclab_codebook;

/* Message of the last failed call on this thread; empty after success. */
GICLAB_API const char* giclab_last_error(void);
GICLAB_API const char* giclab_status_string(giclab_status status);
GICLAB_API const char* giclab_version(void);

/* NULL restores the default stderr handler. */
typedef void (*giclab_warning_fn)(const char* message, void* user);
GICLAB_API void giclab_set_warning_callback(giclab_warning_fn fn, void* user);

GICLAB_API void giclab_string_free(char* s);

/* distributions */
GICLAB_API giclab_status giclab_dist_gaussian(double mean, double variance, giclab_dist** out);
GICLAB_API giclab_status giclab_dist_discrete(const double* points, const double* probs, size_t count,
                                              giclab_dist** out);
GICLAB_API giclab_status giclab_dist_mixture(const double* weights, const giclab_dist* const* components,
                                             size_t count, giclab_dist** out);
GICLAB_API giclab_status giclab_dist_preset(const char* name, giclab_dist** out);
/* preset name or JSON object */
GICLAB_API giclab_status giclab_dist_parse(const char* text, giclab_dist** out);
GICLAB_API giclab_status giclab_dist_to_json(const giclab_dist* d, char** out);
GICLAB_API giclab_status giclab_dist_normalized(const giclab_dist* d, giclab_dist** out);
GICLAB_API void giclab_dist_free(giclab_dist* d);
GICLAB_API giclab_status giclab_dist_mean(const giclab_dist* d, double* out);
GICLAB_API giclab_status giclab_dist_variance(const giclab_dist* d, double* out);
GICLAB_API giclab_status giclab_dist_entropy(const giclab_dist* d, double* out);
GICLAB_API giclab_status giclab_dist_min_spacing(const giclab_dist* d, double* out);

/* MMSE and mutual information */
typedef struct giclab_quadrature {
    int order;
    int adaptive_refine;
    double abs_tol;
} giclab_quadrature;

typedef struct giclab_mc_estimate {
    double value;
    double std_error;
    uint64_t samples;
    uint64_t seed;
} giclab_mc_estimate;

GICLAB_API void giclab_quadrature_default(giclab_quadrature* q);

/* q may be NULL for defaults */
GICLAB_API giclab_status giclab_conditional_mean(const giclab_dist* d, double snr, double y, double* out);
GICLAB_API giclab_status giclab_mmse(const giclab_dist* d, double snr, const giclab_quadrature* q, double* out);
GICLAB_API giclab_status giclab_mmse_quadrature(const giclab_dist* d, double snr, const giclab_quadrature* q,
                                                double* out);
GICLAB_API giclab_status giclab_mmse_monte_carlo(const giclab_dist* d, double snr, uint64_t samples,
                                                 uint64_t seed, int threads, giclab_mc_estimate* out);
GICLAB_API giclab_status giclab_mutual_information(const giclab_dist* d, double snr, const giclab_quadrature* q,
                                                   double* out);
GICLAB_API giclab_status giclab_mutual_information_integrated(const giclab_dist* d, double snr,
                                                              const giclab_quadrature* q, double* out);
GICLAB_API giclab_status giclab_mutual_information_direct(const giclab_dist* d, double snr,
                                                          const giclab_quadrature* q, double* out);

GICLAB_API giclab_status giclab_good_code_mi(double design_snr, double gamma, double* out);
GICLAB_API giclab_status giclab_good_code_mmse(double design_snr, double gamma, double* out);

typedef struct giclab_immse_point {
    double snr;
    double derivative;
    double half_mmse;
    double abs_error;
} giclab_immse_point;

typedef struct giclab_immse_report {
    size_t count;
    double max_abs_error;
    double worst_snr;
    double tolerance;
    double step;
    int pass;
} giclab_immse_report;

/* points may be NULL; otherwise it receives min(capacity, grid - 1) entries */
GICLAB_API giclab_status giclab_verify_immse(const giclab_dist* d, double snr_max, int grid, double tol,
                                             const giclab_quadrature* q, giclab_immse_report* report,
                                             giclab_immse_point* points, size_t capacity);

/* out receives n eigenvalues */
GICLAB_API giclab_status giclab_max_trace_mmse_spectrum(int n, double gamma, double trace_budget, double* out);

/* interference channel */
typedef struct giclab_interference_params {
    double snr1;
    double snr2;
    double a;
    double b;
} giclab_interference_params;

typedef struct giclab_rate_pair {
    double rx;
    double rz;
} giclab_rate_pair;

typedef struct giclab_chain_rule_report {
    double via_interference;
    double via_joint;
    double gap;
    double tolerance;
    int pass;
} giclab_chain_rule_report;

GICLAB_API giclab_status giclab_effective_snr(double gamma, const giclab_interference_params* p, double* out);
GICLAB_API giclab_status giclab_interference_mi(const giclab_dist* z, double gamma,
                                                const giclab_interference_params* p, const giclab_quadrature* q,
                                                double* out);
GICLAB_API giclab_status giclab_interference_mi_derivative(const giclab_dist* z, double gamma,
                                                           const giclab_interference_params* p,
                                                           const giclab_quadrature* q, double* out);
GICLAB_API giclab_status giclab_chain_rule_check(const giclab_dist* z, double gamma,
                                                 const giclab_interference_params* p, double tol,
                                                 giclab_chain_rule_report* out);
GICLAB_API giclab_status giclab_mmse_w(const giclab_dist* z, double gamma, const giclab_interference_params* p,
                                       const giclab_quadrature* q, double* out);
GICLAB_API giclab_status giclab_zero_mmse_threshold(const giclab_interference_params* p, double* out);
GICLAB_API giclab_status giclab_corner_point_z(const giclab_interference_params* p, giclab_rate_pair* out);
GICLAB_API giclab_status giclab_corner_points_weak(const giclab_interference_params* p, giclab_rate_pair* first,
                                                   giclab_rate_pair* second);
GICLAB_API giclab_status giclab_corner_point_mixed(const giclab_interference_params* p, giclab_rate_pair* corner,
                                                   giclab_rate_pair* mac_bound);
/* *exists is 0 when the interval is empty */
GICLAB_API giclab_status giclab_tin_b_interval(const giclab_interference_params* p, int* exists, double* lo,
                                               double* hi);

/* simulator */
typedef struct giclab_mc_options {
    uint64_t samples;
    uint64_t seed;
    int threads;
} giclab_mc_options;

typedef struct giclab_estimator_report {
    giclab_mc_estimate mmse_opt;
    giclab_mc_estimate mse_bitwise_linear;
    giclab_mc_estimate gap;
} giclab_estimator_report;

typedef struct giclab_decomposition_report {
    giclab_mc_estimate total;
    giclab_mc_estimate term1;
    giclab_mc_estimate term2;
    giclab_mc_estimate cross1;
    giclab_mc_estimate cross2;
    giclab_mc_estimate residual;
    double limit_total;
} giclab_decomposition_report;

typedef enum giclab_test_function {
    GICLAB_G_IDENTITY = 0,
    GICLAB_G_SQUARE = 1,
    GICLAB_G_CLIPPED_CUBE = 2
} giclab_test_function;

typedef enum giclab_estimator {
    GICLAB_EST_OPTIMAL = 0,
    GICLAB_EST_BITWISE_LINEAR = 1
} giclab_estimator;

typedef enum giclab_z_estimator {
    GICLAB_Z_GAUSSIAN_APPROX = 0,
    GICLAB_Z_EXACT = 1
} giclab_z_estimator;

GICLAB_API void giclab_mc_options_default(giclab_mc_options* o);

GICLAB_API giclab_status giclab_codebook_size(size_t n, double rate_nats, uint64_t* m);
GICLAB_API giclab_status giclab_codebook_random(size_t n, double rate_nats, uint64_t seed, giclab_codebook** out);
/* words is row-major, count = m·n */
GICLAB_API giclab_status giclab_codebook_from_words(size_t n, const double* words, size_t count, uint64_t seed,
                                                    int normalize, giclab_codebook** out);
GICLAB_API void giclab_codebook_free(giclab_codebook* cb);
GICLAB_API size_t giclab_codebook_n(const giclab_codebook* cb);
GICLAB_API size_t giclab_codebook_m(const giclab_codebook* cb);
GICLAB_API double giclab_codebook_rate(const giclab_codebook* cb);
GICLAB_API giclab_status giclab_codebook_word(const giclab_codebook* cb, size_t k, double* out);
GICLAB_API giclab_status giclab_covariance_trace(const giclab_codebook* cb, double* second_moment, double* central);

/* out receives m probabilities */
GICLAB_API giclab_status giclab_posterior(const giclab_codebook* cb, const double* y, size_t len, double snr,
                                          double* out);
GICLAB_API giclab_status giclab_empirical_mmse_x(const giclab_codebook* cb, double snr, const giclab_mc_options* o,
                                                 giclab_mc_estimate* out);
GICLAB_API giclab_status giclab_estimator_gap(const giclab_codebook* cb, double snr, const giclab_mc_options* o,
                                              giclab_estimator_report* out);
GICLAB_API giclab_status giclab_w_decomposition(const giclab_codebook* cb, const giclab_dist* z, double gamma,
                                                const giclab_interference_params* p, const giclab_mc_options* o,
                                                giclab_z_estimator estimator, giclab_decomposition_report* out);
GICLAB_API giclab_status giclab_orthogonality_residual(const giclab_codebook* cb, double snr,
                                                       giclab_test_function g, const giclab_mc_options* o,
                                                       giclab_estimator estimator, giclab_mc_estimate* out);

#ifdef __cplusplus
}
#endif

#endif
