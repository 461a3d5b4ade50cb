#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "giclab.h"

namespace {

struct Dist {
    giclab_dist* ptr = nullptr;
    ~Dist() { giclab_dist_free(ptr); }
};

struct Book {
    giclab_codebook* ptr = nullptr;
    ~Book() { giclab_codebook_free(ptr); }
};

void collect(const char* message, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(message); }

const giclab_interference_params kRef{10.0, 10.0, 0.5, 0.0};

}  // namespace

TEST_CASE("status strings and version") {
    CHECK(std::string(giclab_status_string(GICLAB_OK)) == "ok");
    CHECK(std::string(giclab_status_string(GICLAB_E_NULL)) == "null_pointer");
    CHECK(std::string(giclab_status_string(GICLAB_E_CAP_EXCEEDED)).size() > 0);
    CHECK(std::string(giclab_version()) == "0.1.0");
}

TEST_CASE("errors set the thread-local message") {
    Dist d;
    CHECK(giclab_dist_gaussian(0.0, -1.0, &d.ptr) == GICLAB_E_INVALID_ARGUMENT);
    CHECK(d.ptr == nullptr);
    CHECK(std::strlen(giclab_last_error()) > 0);
    CHECK(giclab_dist_gaussian(0.0, 1.0, &d.ptr) == GICLAB_OK);
    CHECK(std::string(giclab_last_error()).empty());
    CHECK(giclab_dist_gaussian(0.0, 1.0, nullptr) == GICLAB_E_NULL);
    double v = 0.0;
    CHECK(giclab_dist_variance(nullptr, &v) == GICLAB_E_NULL);
    CHECK(giclab_mmse(d.ptr, 1.0, nullptr, nullptr) == GICLAB_E_NULL);
    giclab_dist_free(nullptr);
    giclab_codebook_free(nullptr);
}

TEST_CASE("distribution handles") {
    Dist b, g, mix, parsed, norm;
    REQUIRE(giclab_dist_preset("bpsk", &b.ptr) == GICLAB_OK);
    double h = 0.0, spacing = 0.0, mean = 1.0;
    CHECK(giclab_dist_entropy(b.ptr, &h) == GICLAB_OK);
    CHECK(h == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(giclab_dist_min_spacing(b.ptr, &spacing) == GICLAB_OK);
    CHECK(spacing == 2.0);
    CHECK(giclab_dist_mean(b.ptr, &mean) == GICLAB_OK);
    CHECK(mean == 0.0);
    CHECK(giclab_dist_preset("nope", &g.ptr) != GICLAB_OK);

    REQUIRE(giclab_dist_gaussian(0.0, 1.0, &g.ptr) == GICLAB_OK);
    CHECK(giclab_dist_entropy(g.ptr, &h) == GICLAB_E_INVALID_ARGUMENT);
    const double weights[] = {0.5, 0.5};
    const giclab_dist* comps[] = {b.ptr, g.ptr};
    REQUIRE(giclab_dist_mixture(weights, comps, 2, &mix.ptr) == GICLAB_OK);
    double v = 0.0;
    giclab_dist_variance(mix.ptr, &v);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

    char* text = nullptr;
    REQUIRE(giclab_dist_to_json(mix.ptr, &text) == GICLAB_OK);
    REQUIRE(giclab_dist_parse(text, &parsed.ptr) == GICLAB_OK);
    giclab_string_free(text);
    double m1 = 0.0, m2 = 0.0;
    giclab_mmse(mix.ptr, 2.0, nullptr, &m1);
    giclab_mmse(parsed.ptr, 2.0, nullptr, &m2);
    CHECK(m1 == m2);
    giclab_dist* bad = nullptr;
    CHECK(giclab_dist_parse("{\"kind\": 3}", &bad) == GICLAB_E_CONFIG);
    CHECK(bad == nullptr);

    const double pts[] = {-2.0, 2.0};
    const double probs[] = {0.5, 0.5};
    Dist wide;
    REQUIRE(giclab_dist_discrete(pts, probs, 2, &wide.ptr) == GICLAB_OK);
    REQUIRE(giclab_dist_normalized(wide.ptr, &norm.ptr) == GICLAB_OK);
    giclab_dist_variance(norm.ptr, &v);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
    Dist broken;
    CHECK(giclab_dist_discrete(pts, probs, 0, &broken.ptr) == GICLAB_E_INVALID_ARGUMENT);
}

TEST_CASE("mmse and mutual information calls") {
    Dist g, b;
    giclab_dist_gaussian(0.0, 1.0, &g.ptr);
    giclab_dist_preset("bpsk", &b.ptr);
    double v = 0.0;
    CHECK(giclab_mmse(g.ptr, 10.0, nullptr, &v) == GICLAB_OK);
    CHECK(v == doctest::Approx(1.0 / 11.0).epsilon(1e-15));
    CHECK(giclab_mutual_information(g.ptr, 10.0, nullptr, &v) == GICLAB_OK);
    CHECK(v == doctest::Approx(0.5 * std::log(11.0)).epsilon(1e-14));
    CHECK(giclab_conditional_mean(b.ptr, 1.0, 0.5, &v) == GICLAB_OK);
    CHECK(v == doctest::Approx(std::tanh(0.5)).epsilon(1e-15));

    giclab_quadrature q;
    giclab_quadrature_default(&q);
    CHECK(q.order == 129);
    q.order = 1;
    CHECK(giclab_mmse_quadrature(b.ptr, 1.0, &q, &v) == GICLAB_E_INVALID_ARGUMENT);
    giclab_quadrature_default(&q);
    double integ = 0.0, direct = 0.0;
    CHECK(giclab_mutual_information_integrated(b.ptr, 3.0, &q, &integ) == GICLAB_OK);
    CHECK(giclab_mutual_information_direct(b.ptr, 3.0, &q, &direct) == GICLAB_OK);
    CHECK(std::abs(integ - direct) < 1e-8);

    giclab_mc_estimate e{};
    CHECK(giclab_mmse_monte_carlo(b.ptr, 2.0, 100000, 9, 2, &e) == GICLAB_OK);
    double ref = 0.0;
    giclab_mmse(b.ptr, 2.0, nullptr, &ref);
    CHECK(std::abs(e.value - ref) <= 4.0 * e.std_error);
    CHECK(e.seed == 9);
    CHECK(e.samples == 100000);
    CHECK(giclab_mmse_monte_carlo(b.ptr, 2.0, 10, 9, 2, &e) == GICLAB_E_INVALID_ARGUMENT);

    CHECK(giclab_mmse(b.ptr, 1.0, nullptr, &v) == GICLAB_OK);
    const double huge[] = {-1e160, 1e160};
    const double half[] = {0.5, 0.5};
    Dist far;
    giclab_dist_discrete(huge, half, 2, &far.ptr);
    CHECK(giclab_mmse(far.ptr, 1.0, nullptr, &v) == GICLAB_E_NUMERIC_OVERFLOW);

    CHECK(giclab_good_code_mi(10.0, 0.5, &v) == GICLAB_OK);
    CHECK(v == doctest::Approx(0.5 * std::log(6.0)).epsilon(1e-15));
    CHECK(giclab_good_code_mmse(10.0, 0.5, &v) == GICLAB_OK);
    CHECK(v == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("immse verification and spectrum") {
    Dist b;
    giclab_dist_preset("bpsk", &b.ptr);
    giclab_immse_report r{};
    std::vector<giclab_immse_point> pts(400);
    CHECK(giclab_verify_immse(b.ptr, 10.0, 201, 1e-6, nullptr, &r, pts.data(), pts.size()) == GICLAB_OK);
    CHECK(r.pass == 1);
    CHECK(r.count == 200);
    CHECK(r.max_abs_error < 1e-6);
    CHECK(pts[10].abs_error <= r.max_abs_error);
    CHECK(giclab_verify_immse(b.ptr, 10.0, 5, 1e-6, nullptr, &r, nullptr, 0) == GICLAB_E_INVALID_ARGUMENT);

    std::vector<double> eig(4);
    CHECK(giclab_max_trace_mmse_spectrum(4, 2.0, 1.0, eig.data()) == GICLAB_OK);
    for (double e : eig) CHECK(e == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(giclab_max_trace_mmse_spectrum(1, 2.0, 1.0, eig.data()) == GICLAB_E_INVALID_ARGUMENT);
}

TEST_CASE("interference calls") {
    Dist g, b;
    giclab_dist_gaussian(0.0, 1.0, &g.ptr);
    giclab_dist_preset("bpsk", &b.ptr);
    double v = 0.0;
    CHECK(giclab_effective_snr(1.0, &kRef, &v) == GICLAB_OK);
    CHECK(v == doctest::Approx(5.0 / 11.0).epsilon(1e-15));
    CHECK(giclab_interference_mi(g.ptr, 1.0, &kRef, nullptr, &v) == GICLAB_OK);
    CHECK(v == doctest::Approx(0.5 * std::log(16.0 / 11.0)).epsilon(1e-15));
    CHECK(giclab_interference_mi_derivative(g.ptr, 0.0, &kRef, nullptr, &v) == GICLAB_OK);
    CHECK(v == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(giclab_mmse_w(g.ptr, 0.0, &kRef, nullptr, &v) == GICLAB_OK);
    CHECK(v == doctest::Approx(15.0).epsilon(1e-15));
    giclab_chain_rule_report cr{};
    CHECK(giclab_chain_rule_check(g.ptr, 1.0, &kRef, 1e-9, &cr) == GICLAB_OK);
    CHECK(cr.pass == 1);
    CHECK(giclab_chain_rule_check(b.ptr, 1.0, &kRef, 1e-9, &cr) == GICLAB_E_INVALID_ARGUMENT);
    CHECK(giclab_zero_mmse_threshold(&kRef, &v) == GICLAB_OK);
    CHECK(v == doctest::Approx(5.0 / 11.0).epsilon(1e-15));
    CHECK(giclab_zero_mmse_threshold(nullptr, &v) == GICLAB_E_NULL);

    giclab_rate_pair z{}, first{}, second{}, corner{}, mac{};
    CHECK(giclab_corner_point_z(&kRef, &z) == GICLAB_OK);
    CHECK(z.rx == doctest::Approx(0.5 * std::log(11.0)).epsilon(1e-15));
    const giclab_interference_params weak{10.0, 10.0, 0.5, 0.3};
    CHECK(giclab_corner_points_weak(&weak, &first, &second) == GICLAB_OK);
    CHECK(second.rx == doctest::Approx(0.5 * std::log(14.0 / 11.0)).epsilon(1e-15));
    CHECK(giclab_corner_point_mixed(&weak, &corner, &mac) == GICLAB_E_INVALID_ARGUMENT);
    const giclab_interference_params mixed{10.0, 10.0, 0.5, 1.5};
    CHECK(giclab_corner_point_mixed(&mixed, &corner, &mac) == GICLAB_OK);
    CHECK(mac.rz == doctest::Approx(0.5 * std::log(26.0 / 11.0)).epsilon(1e-15));
    int exists = 0;
    double lo = 0.0, hi = 0.0;
    CHECK(giclab_tin_b_interval(&mixed, &exists, &lo, &hi) == GICLAB_OK);
    CHECK(exists == 1);
    CHECK(hi == doctest::Approx(2.1).epsilon(1e-15));
    const giclab_interference_params bad{10.0, 10.0, 1.5, 0.0};
    CHECK(giclab_corner_point_z(&bad, &z) == GICLAB_E_INVALID_ARGUMENT);
}

TEST_CASE("warning callback") {
    std::vector<std::string> seen;
    giclab_set_warning_callback(collect, &seen);
    const giclab_interference_params p{10.0, 10.0, 0.5, 0.2};
    giclab_rate_pair r{};
    CHECK(giclab_corner_point_z(&p, &r) == GICLAB_OK);
    giclab_set_warning_callback(nullptr, nullptr);
    CHECK(seen.size() == 1);
}

TEST_CASE("codebook handles and simulator calls") {
    uint64_t m = 0;
    CHECK(giclab_codebook_size(8, std::log(256.0) / 8.0, &m) == GICLAB_OK);
    CHECK(m == 256);
    CHECK(giclab_codebook_size(33, 0.1, &m) == GICLAB_E_CAP_EXCEEDED);
    CHECK(giclab_codebook_size(32, 0.3, &m) == GICLAB_E_CAP_EXCEEDED);

    Book cb;
    REQUIRE(giclab_codebook_random(4, std::log(16.0) / 4.0, 8, &cb.ptr) == GICLAB_OK);
    CHECK(giclab_codebook_n(cb.ptr) == 4);
    CHECK(giclab_codebook_m(cb.ptr) == 16);
    CHECK(giclab_codebook_rate(cb.ptr) == doctest::Approx(std::log(16.0) / 4.0));
    CHECK(giclab_codebook_n(nullptr) == 0);
    double word[4];
    CHECK(giclab_codebook_word(cb.ptr, 3, word) == GICLAB_OK);
    CHECK(word[0] * word[0] + word[1] * word[1] + word[2] * word[2] + word[3] * word[3] ==
          doctest::Approx(4.0).epsilon(1e-13));
    CHECK(giclab_codebook_word(cb.ptr, 16, word) == GICLAB_E_INVALID_ARGUMENT);

    std::vector<double> post(16);
    const double y[] = {0.1, -0.2, 0.3, 0.0};
    CHECK(giclab_posterior(cb.ptr, y, 4, 1.0, post.data()) == GICLAB_OK);
    double sum = 0.0;
    for (double p : post) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(giclab_posterior(cb.ptr, y, 3, 1.0, post.data()) == GICLAB_E_INVALID_ARGUMENT);

    giclab_mc_options o;
    giclab_mc_options_default(&o);
    o.samples = 20000;
    giclab_mc_estimate e{};
    CHECK(giclab_empirical_mmse_x(cb.ptr, 2.0, &o, &e) == GICLAB_OK);
    CHECK(e.value > 0.0);
    giclab_estimator_report er{};
    CHECK(giclab_estimator_gap(cb.ptr, 2.0, &o, &er) == GICLAB_OK);
    CHECK(er.gap.value >= 0.0);

    Dist g;
    giclab_dist_gaussian(0.0, 1.0, &g.ptr);
    giclab_decomposition_report dr{};
    CHECK(giclab_w_decomposition(cb.ptr, g.ptr, 0.5, &kRef, &o, GICLAB_Z_GAUSSIAN_APPROX, &dr) == GICLAB_OK);
    CHECK(std::abs(dr.residual.value) <= 4.0 * dr.residual.std_error);
    CHECK(dr.limit_total == doctest::Approx(10.0 / 6.0 + 5.0 / 36.0 * 12.0 / 17.0));
    CHECK(giclab_w_decomposition(cb.ptr, g.ptr, 0.5, &kRef, &o, static_cast<giclab_z_estimator>(7), &dr) ==
          GICLAB_E_INVALID_ARGUMENT);
    CHECK(giclab_orthogonality_residual(cb.ptr, 2.0, GICLAB_G_SQUARE, &o, GICLAB_EST_OPTIMAL, &e) == GICLAB_OK);
    CHECK(std::abs(e.value) <= 4.0 * e.std_error);
    CHECK(giclab_orthogonality_residual(cb.ptr, 2.0, static_cast<giclab_test_function>(9), &o, GICLAB_EST_OPTIMAL,
                                        &e) == GICLAB_E_INVALID_ARGUMENT);

    double second = 0.0, central = 0.0;
    CHECK(giclab_covariance_trace(cb.ptr, &second, &central) == GICLAB_OK);
    CHECK(second == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(central <= second);

    const double words[] = {1.0, -1.0};
    Book anti;
    CHECK(giclab_codebook_from_words(1, words, 2, 0, 1, &anti.ptr) == GICLAB_OK);
    CHECK(giclab_codebook_m(anti.ptr) == 2);
    Book bad;
    CHECK(giclab_codebook_from_words(2, words, 3, 0, 1, &bad.ptr) == GICLAB_E_INVALID_ARGUMENT);
    CHECK(giclab_codebook_from_words(1, nullptr, 2, 0, 1, &bad.ptr) == GICLAB_E_NULL);
}
