#include <doctest.h>

#include <cmath>
#include <numbers>

#include "giclab/dists.hpp"
#include "giclab/dists_json.hpp"
#include "giclab/error.hpp"
#include "giclab/rng.hpp"

using namespace giclab;

namespace {

struct Moments {
    double mean;
    double var;
};

Moments sample_moments(const ScalarDistribution& d, int n, std::uint64_t seed) {
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        RandomStream s(seed, static_cast<std::uint64_t>(i));
        const double x = d.sample(s);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    return {mean, sq / n - mean * mean};
}

}  // namespace

TEST_CASE("variance examples") {
    CHECK(variance(ScalarDistribution::gaussian(0.0, 1.0)) == 1.0);
    CHECK(variance(bpsk()) == doctest::Approx(1.0).epsilon(1e-15));
    const auto mix = ScalarDistribution::mixture(
        {{0.5, ScalarDistribution::gaussian(0.0, 1.0)}, {0.5, ScalarDistribution::discrete({0.0}, {1.0})}});
    CHECK(variance(mix) == doctest::Approx(0.5).epsilon(1e-15));
    const auto shifted = ScalarDistribution::mixture(
        {{0.25, ScalarDistribution::gaussian(-2.0, 0.5)}, {0.75, ScalarDistribution::gaussian(1.0, 2.0)}});
    // 0.25·0.5 + 0.75·2 + 0.25·0.75·9
    CHECK(variance(shifted) == doctest::Approx(0.125 + 1.5 + 1.6875).epsilon(1e-14));
}

TEST_CASE("construction rejects invalid laws") {
    CHECK_THROWS_AS(ScalarDistribution::gaussian(0.0, -1.0), InvalidArgument);
    CHECK_THROWS_AS(ScalarDistribution::gaussian(NAN, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ScalarDistribution::discrete({}, {}), InvalidArgument);
    CHECK_THROWS_AS(ScalarDistribution::discrete({0.0, 1.0}, {0.5}), InvalidArgument);
    CHECK_THROWS_AS(ScalarDistribution::discrete({0.0, 1.0}, {0.5, 0.5 + 1e-9}), InvalidArgument);
    CHECK_THROWS_AS(ScalarDistribution::discrete({1.0, 1.0}, {0.5, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(ScalarDistribution::discrete({0.0, 1.0}, {1.5, -0.5}), InvalidArgument);
    CHECK_NOTHROW(ScalarDistribution::discrete({0.0, 1.0}, {0.5, 0.5 + 1e-13}));
    CHECK_THROWS_AS(ScalarDistribution::mixture({{0.7, bpsk()}}), InvalidArgument);
    const auto level1 = ScalarDistribution::mixture({{1.0, bpsk()}});
    const auto level2 = ScalarDistribution::mixture({{1.0, level1}});
    CHECK(level2.depth() == 2);
    CHECK_THROWS_AS(ScalarDistribution::mixture({{1.0, level2}}), InvalidArgument);
}

TEST_CASE("wrong-kind accessors throw") {
    CHECK_THROWS_AS(bpsk().gaussian_mean(), InvalidArgument);
    CHECK_THROWS_AS(ScalarDistribution::gaussian(0.0, 1.0).points(), InvalidArgument);
    CHECK_THROWS_AS(bpsk().components(), InvalidArgument);
}

TEST_CASE("entropy of discrete laws") {
    CHECK(entropy_discrete(bpsk()) == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
    CHECK(entropy_discrete(ScalarDistribution::discrete({0.0}, {1.0})) == 0.0);
    CHECK(entropy_discrete(pam(4)) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK_THROWS_AS(entropy_discrete(ScalarDistribution::gaussian(0.0, 1.0)), InvalidArgument);
}

TEST_CASE("presets are unit power") {
    for (const char* name : {"gaussian", "bpsk", "4pam", "8pam", "16pam", "gmix"}) {
        CAPTURE(name);
        const auto d = preset(name);
        REQUIRE(d);
        CHECK(d->variance() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(d->mean()) < 1e-15);
    }
    CHECK(preset("zero")->variance() == 0.0);
    CHECK_FALSE(preset("qam"));
    CHECK_THROWS_AS(pam(1), InvalidArgument);
}

TEST_CASE("sampling") {
    RandomStream s(1, 2);
    CHECK(sample(ScalarDistribution::discrete({3.0}, {1.0}), s) == 3.0);

    const auto g = ScalarDistribution::gaussian(0.0, 1.0);
    RandomStream a(77, 5), b(77, 5);
    CHECK(g.sample(a) == g.sample(b));

    const int n = 1000000;
    const auto m = sample_moments(g, n, 3);
    CHECK(std::abs(m.mean) < 4e-3);

    const auto scaled = ScalarDistribution::gaussian(2.0, 0.25);
    const auto ms = sample_moments(scaled, 200000, 4);
    CHECK(std::abs(ms.mean - 2.0) < 4.0 * 0.5 / std::sqrt(200000.0));
}

TEST_CASE("discrete empirical moments match exact moments") {
    const int n = 1000000;
    const auto skew = ScalarDistribution::discrete({-1.0, 0.5, 3.0}, {0.2, 0.7, 0.1});
    for (const auto& d : {bpsk(), pam(4), pam(8), skew}) {
        const auto m = sample_moments(d, n, 11);
        const double sd = std::sqrt(d.variance());
        CHECK(std::abs(m.mean - d.mean()) < 4.0 * sd / std::sqrt(n));
        // var of (x-μ)² from the exact fourth central moment
        double m4 = 0.0;
        for (std::size_t i = 0; i < d.points().size(); ++i) {
            m4 += d.probs()[i] * std::pow(d.points()[i] - d.mean(), 4);
        }
        const double se = std::sqrt((m4 - d.variance() * d.variance()) / n);
        // plus the bias from centring on the sample mean
        CHECK(std::abs(m.var - d.variance()) <= 4.0 * se + 16.0 * d.variance() / n);
    }
}

TEST_CASE("mixture variance matches pooled samples") {
    const auto d = ScalarDistribution::mixture(
        {{0.3, ScalarDistribution::gaussian(-1.0, 0.5)}, {0.5, bpsk()}, {0.2, ScalarDistribution::gaussian(2.0, 1.0)}});
    const int n = 10000000;
    double sum = 0.0, sq = 0.0, quad = 0.0;
    const double mu = d.mean();
    for (int i = 0; i < n; ++i) {
        RandomStream s(99, static_cast<std::uint64_t>(i));
        const double x = d.sample(s) - mu;
        sum += x;
        sq += x * x;
        quad += x * x * x * x;
    }
    const double var = sq / n - (sum / n) * (sum / n);
    const double se = std::sqrt((quad / n - (sq / n) * (sq / n)) / n);
    CHECK(std::abs(var - d.variance()) < 4.0 * se);
}

TEST_CASE("scaling and normalization") {
    const auto d = ScalarDistribution::discrete({-2.0, 0.0, 4.0}, {0.25, 0.5, 0.25});
    const auto u = normalized_to_unit_variance(d);
    CHECK(u.variance() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u.kind() == ScalarDistribution::Kind::discrete);
    const auto zero = ScalarDistribution::discrete({0.0}, {1.0});
    CHECK(normalized_to_unit_variance(zero).variance() == 0.0);
    CHECK(min_point_spacing(pam(4)) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("json schema round trip") {
    const auto mix = ScalarDistribution::mixture(
        {{0.5, ScalarDistribution::gaussian(0.1, 0.3)}, {0.5, ScalarDistribution::discrete({-1.0, 2.0}, {0.4, 0.6})}});
    for (const auto& d : {ScalarDistribution::gaussian(0.25, 2.0), pam(8), mix}) {
        const auto text = to_json(d).dump();
        const auto back = parse_distribution(text);
        CHECK(to_json(back).dump() == text);
        CHECK(back.variance() == d.variance());
    }
    CHECK(parse_distribution("bpsk").variance() == doctest::Approx(1.0));
    CHECK(parse_distribution(R"({"kind":"gaussian","mean":0,"variance":1})").variance() == 1.0);
    CHECK_THROWS_AS(parse_distribution("nope"), ConfigError);
    CHECK_THROWS_AS(parse_distribution(R"({"kind":"gaussian","mean":0})"), ConfigError);
    CHECK_THROWS_AS(parse_distribution(R"({"kind":"beta"})"), ConfigError);
    CHECK_THROWS_AS(parse_distribution("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_distribution(R"({"kind":"discrete","points":[0,1],"probs":[0.5,0.6]})"), InvalidArgument);
}
