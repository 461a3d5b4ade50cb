#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "giclab/dists.hpp"
#include "giclab/error.hpp"
#include "giclab/immse.hpp"
#include "giclab/interference.hpp"
#include "giclab/mmse.hpp"

using namespace giclab;

namespace {

const InterferenceParams kRef{10.0, 10.0, 0.5, 0.0};

struct WarningCapture {
    std::vector<std::string> messages;
    WarningCapture() {
        set_warning_handler([this](const std::string& m) { messages.push_back(m); });
    }
    ~WarningCapture() { set_warning_handler(nullptr); }
};

std::vector<ScalarDistribution> unit_laws() {
    return {ScalarDistribution::gaussian(0.0, 1.0), bpsk(), pam(4), gaussian_mixture_example()};
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(kRef.validate());
    CHECK_THROWS_AS((InterferenceParams{0.0, 1.0, 0.5, 0.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((InterferenceParams{1.0, 1.0, 1.0, 0.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((InterferenceParams{1.0, 1.0, 0.0, 0.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((InterferenceParams{1.0, 1.0, 0.5, -0.1}.validate()), InvalidArgument);
    CHECK_THROWS_AS((InterferenceParams{1.0, INFINITY, 0.5, 0.0}.validate()), InvalidArgument);
}

TEST_CASE("effective snr") {
    CHECK(effective_snr(1.0, kRef) == doctest::Approx(5.0 / 11.0).epsilon(1e-15));
    CHECK(effective_snr(0.0, kRef) == 0.0);
    const double asym = 0.5 * 10.0 / 10.0;
    CHECK(std::abs(effective_snr(1e6, kRef) - asym) / asym < 1e-4);
    CHECK_THROWS_AS(effective_snr(-1.0, kRef), InvalidArgument);
}

TEST_CASE("interference mi derivative examples") {
    const auto g = ScalarDistribution::gaussian(0.0, 1.0);
    CHECK(interference_mi_derivative(g, 0.0, kRef) == doctest::Approx(2.5).epsilon(1e-15));
    const auto zero = ScalarDistribution::discrete({0.0}, {1.0});
    {
        WarningCapture w;
        CHECK(interference_mi_derivative(zero, 0.4, kRef) == 0.0);
    }
    const double expected = 0.5 * mmse(bpsk(), 5.0 / 12.0) * 5.0 / 36.0;
    CHECK(interference_mi_derivative(bpsk(), 0.5, kRef) == doctest::Approx(expected).epsilon(1e-14));
    const double h = 1e-4;
    const double fd = (interference_mi(bpsk(), 0.5 + h, kRef) - interference_mi(bpsk(), 0.5 - h, kRef)) / (2 * h);
    CHECK(std::abs(fd - expected) < 1e-5);
    CHECK_THROWS_AS(interference_mi_derivative(g, 1.0, kRef), InvalidArgument);
}

TEST_CASE("interference mi examples") {
    const auto g = ScalarDistribution::gaussian(0.0, 1.0);
    CHECK(interference_mi(g, 1.0, kRef) == doctest::Approx(0.5 * std::log(16.0 / 11.0)).epsilon(1e-15));
    for (const auto& z : unit_laws()) CHECK(interference_mi(z, 0.0, kRef) == 0.0);
    CHECK(interference_mi(g, 3.0, kRef) == interference_mi(g, 1.0, kRef));
}

TEST_CASE("interference mi properties") {
    for (const auto& z : unit_laws()) {
        double prev = 0.0;
        for (int i = 0; i <= 30; ++i) {
            const double gamma = 0.05 * i;
            const double v = interference_mi(z, gamma, kRef);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
        CHECK(interference_mi(z, 1.7, kRef) == interference_mi(z, 1.0, kRef));
        CHECK(std::abs(interference_mi(z, 1.0, kRef) - mutual_information(z, zero_mmse_threshold(kRef))) < 1e-9);
    }
}

TEST_CASE("finite differences match the derivative formula") {
    const double h = 1e-4;
    for (const auto& z : {ScalarDistribution::gaussian(0.0, 1.0), bpsk(), pam(4)}) {
        for (int k = 1; k <= 9; ++k) {
            const double g = 0.1 * k;
            const double fd = (interference_mi(z, g + h, kRef) - interference_mi(z, g - h, kRef)) / (2 * h);
            CHECK(std::abs(fd - interference_mi_derivative(z, g, kRef)) < 1e-5);
        }
    }
}

TEST_CASE("mmse_w examples and consistency with the derivative") {
    const auto g = ScalarDistribution::gaussian(0.0, 1.0);
    const auto zero = ScalarDistribution::discrete({0.0}, {1.0});
    {
        WarningCapture w;
        CHECK(mmse_w(zero, 0.0, kRef) == doctest::Approx(10.0));
    }
    CHECK(mmse_w(g, 0.0, kRef) == doctest::Approx(15.0).epsilon(1e-15));
    const double limit = 10.0 / 11.0 + 5.0 / 176.0;
    CHECK(std::abs(mmse_w(g, std::nextafter(1.0, 0.0), kRef) - limit) < 1e-12);
    for (const auto& z : unit_laws()) {
        for (double gamma : {0.0, 0.3, 0.8}) {
            const double lhs = 2.0 * interference_mi_derivative(z, gamma, kRef) + 10.0 / (1.0 + gamma * 10.0);
            CHECK(std::abs(lhs - mmse_w(z, gamma, kRef)) < 1e-9);
        }
    }
    CHECK_THROWS_AS(mmse_w(g, 1.0, kRef), InvalidArgument);
}

TEST_CASE("chain rule check") {
    const auto g = ScalarDistribution::gaussian(0.0, 1.0);
    const auto r = chain_rule_check(g, 1.0, kRef, 1e-9);
    CHECK(r.pass);
    CHECK(r.gap < 1e-9);
    CHECK(r.via_joint == doctest::Approx(0.5 * std::log(16.0)).epsilon(1e-15));
    const auto zero = chain_rule_check(g, 0.0, kRef, 1e-9);
    CHECK(zero.via_interference == 0.0);
    CHECK(zero.via_joint == 0.0);
    const auto other = chain_rule_check(g, 0.25, {4.0, 8.0, 0.75, 0.0}, 1e-9);
    CHECK(other.pass);
    CHECK_THROWS_AS(chain_rule_check(bpsk(), 0.5, kRef, 1e-9), InvalidArgument);
    CHECK_THROWS_AS(chain_rule_check(g, 1.5, kRef, 1e-9), InvalidArgument);
}

TEST_CASE("zero mmse threshold") {
    CHECK(zero_mmse_threshold(kRef) == doctest::Approx(5.0 / 11.0).epsilon(1e-15));
    const InterferenceParams p1{10.0, 10.0, 0.1, 0.0}, p2{10.0, 10.0, 0.2, 0.0};
    CHECK(zero_mmse_threshold(p2) == doctest::Approx(2.0 * zero_mmse_threshold(p1)).epsilon(1e-15));
    const InterferenceParams big{1e6, 10.0, 0.5, 0.0};
    CHECK(std::abs(zero_mmse_threshold(big) - 5.0e-6) / 5.0e-6 < 1e-5);
}

TEST_CASE("corner points") {
    const auto z = corner_point_z(kRef);
    CHECK(z.rx == doctest::Approx(0.5 * std::log(11.0)).epsilon(1e-15));
    CHECK(z.rz == doctest::Approx(0.5 * std::log(16.0 / 11.0)).epsilon(1e-15));
    const auto tiny = corner_point_z({10.0, 1e-9, 0.5, 0.0});
    CHECK(std::abs(tiny.rz) < 1e-9);
    const auto edge = corner_point_z({1.0, 1.0, 0.999, 0.0});
    CHECK(edge.rx == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
    CHECK(edge.rz == doctest::Approx(0.5 * std::log(1.4995)).epsilon(1e-14));
    {
        WarningCapture w;
        corner_point_z({10.0, 10.0, 0.5, 0.2});
        CHECK(w.messages.size() == 1);
    }

    const auto weak = corner_points_weak({10.0, 10.0, 0.5, 0.3});
    CHECK(weak.second.rx == doctest::Approx(0.5 * std::log(14.0 / 11.0)).epsilon(1e-15));
    CHECK(weak.second.rz == doctest::Approx(0.5 * std::log(11.0)).epsilon(1e-15));
    CHECK(weak.first.rx == z.rx);
    CHECK(weak.first.rz == z.rz);
    const auto sym = corner_points_weak({6.0, 6.0, 0.4, 0.4});
    CHECK(sym.first.rx == doctest::Approx(sym.second.rz).epsilon(1e-15));
    CHECK(sym.first.rz == doctest::Approx(sym.second.rx).epsilon(1e-15));
    CHECK_THROWS_AS(corner_points_weak({10.0, 10.0, 0.5, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(corner_points_weak({10.0, 10.0, 0.5, 0.0}), InvalidArgument);

    const auto mixed = corner_point_mixed({10.0, 10.0, 0.5, 1.5});
    CHECK(mixed.corner.rz == doctest::Approx(0.5 * std::log(16.0 / 11.0)).epsilon(1e-15));
    CHECK(mixed.mac_bound.rz == doctest::Approx(0.5 * std::log(26.0 / 11.0)).epsilon(1e-15));
    CHECK_THROWS_AS(corner_point_mixed({10.0, 10.0, 0.5, 0.5}), InvalidArgument);

    double prev_gap = INFINITY;
    for (double a : {0.9, 0.99, 0.999, 0.9999}) {
        const auto m = corner_point_mixed({5.0, 5.0, a, 1.0});
        const double gap = m.mac_bound.rz - m.corner.rz;
        CHECK(gap >= 0.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-4);
}

TEST_CASE("mixed corner never exceeds the MAC bound") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> snr(1e-3, 1e3), a(1e-9, 1.0 - 1e-9), b(1.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const auto m = corner_point_mixed({snr(rng), snr(rng), a(rng), b(rng)});
        CHECK(m.corner.rz <= m.mac_bound.rz);
    }
}

TEST_CASE("tin interval annotation") {
    const auto r = tin_b_interval({10.0, 10.0, 0.5, 1.5});
    REQUIRE(r);
    CHECK(r->lo == 1.0);
    CHECK(r->hi == doctest::Approx(10.5 / 5.0).epsilon(1e-15));
}

TEST_CASE("gaussian interference maximizes mi at gamma one") {
    const double g = interference_mi(ScalarDistribution::gaussian(0.0, 1.0), 1.0, kRef);
    for (const auto& z : {bpsk(), pam(4), gaussian_mixture_example()}) CHECK(interference_mi(z, 1.0, kRef) < g);
}

TEST_CASE("non-unit interference is normalized with a warning") {
    WarningCapture w;
    const auto wide = ScalarDistribution::discrete({-2.0, 2.0}, {0.5, 0.5});
    CHECK(interference_mi(wide, 0.6, kRef) == doctest::Approx(interference_mi(bpsk(), 0.6, kRef)).epsilon(1e-14));
    CHECK_FALSE(w.messages.empty());
}
