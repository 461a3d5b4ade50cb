#include "giclab/dists.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "giclab/error.hpp"

namespace giclab {

struct ScalarDistribution::Impl {
    Kind kind;
    double g_mean = 0.0;
    double g_variance = 0.0;
    std::vector<double> points;
    std::vector<double> probs;
    std::vector<double> cdf;
    std::vector<Component> components;
    std::vector<GaussianAtom> atoms;
    double mean = 0.0;
    double variance = 0.0;
    int depth = 0;
};

namespace {

constexpr double kSumTolerance = 1e-12;

void require(bool ok, const char* message) {
    if (!ok) throw InvalidArgument(message);
}

std::vector<double> cumulative(const std::vector<double>& w) {
    std::vector<double> c(w.size());
    std::partial_sum(w.begin(), w.end(), c.begin());
    return c;
}

// Index of the first cumulative weight exceeding u·total.
std::size_t pick(const std::vector<double>& cdf, double u) {
    const double target = u * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

ScalarDistribution ScalarDistribution::gaussian(double mean, double variance) {
    require(std::isfinite(mean), "gaussian: mean must be finite");
    require(std::isfinite(variance) && variance >= 0.0, "gaussian: variance must be finite and >= 0");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::gaussian;
    impl->g_mean = mean;
    impl->g_variance = variance;
    impl->mean = mean;
    impl->variance = variance;
    impl->atoms = {{1.0, mean, variance}};
    return ScalarDistribution(std::move(impl));
}

ScalarDistribution ScalarDistribution::discrete(std::vector<double> points, std::vector<double> probs) {
    require(!points.empty(), "discrete: at least one point required");
    require(points.size() == probs.size(), "discrete: points and probs differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        require(std::isfinite(points[i]), "discrete: points must be finite");
        require(std::isfinite(probs[i]) && probs[i] >= 0.0, "discrete: probs must be nonnegative");
        total += probs[i];
    }
    require(std::abs(total - 1.0) <= kSumTolerance, "discrete: probs must sum to 1 within 1e-12");
    {
        std::vector<double> sorted = points;
        std::sort(sorted.begin(), sorted.end());
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                "discrete: points must be pairwise distinct");
    }

    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::discrete;
    double mean = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) mean += probs[i] * points[i];
    double var = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = points[i] - mean;
        var += probs[i] * d * d;
    }
    impl->mean = mean;
    impl->variance = var;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (probs[i] > 0.0) impl->atoms.push_back({probs[i], points[i], 0.0});
    }
    impl->cdf = cumulative(probs);
    impl->points = std::move(points);
    impl->probs = std::move(probs);
    return ScalarDistribution(std::move(impl));
}

ScalarDistribution ScalarDistribution::mixture(std::vector<Component> components) {
    require(!components.empty(), "mixture: at least one component required");
    double total = 0.0;
    int child_depth = 0;
    for (const auto& c : components) {
        require(std::isfinite(c.weight) && c.weight >= 0.0, "mixture: weights must be nonnegative");
        total += c.weight;
        child_depth = std::max(child_depth, c.dist.depth());
    }
    require(std::abs(total - 1.0) <= kSumTolerance, "mixture: weights must sum to 1 within 1e-12");
    require(child_depth + 1 <= 2, "mixture: nesting depth exceeds 2");

    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::mixture;
    impl->depth = child_depth + 1;
    double mean = 0.0;
    for (const auto& c : components) mean += c.weight * c.dist.mean();
    // Law of total variance.
    double var = 0.0;
    for (const auto& c : components) {
        const double d = c.dist.mean() - mean;
        var += c.weight * (c.dist.variance() + d * d);
    }
    impl->mean = mean;
    impl->variance = var;
    std::vector<double> weights;
    for (const auto& c : components) {
        weights.push_back(c.weight);
        if (c.weight <= 0.0) continue;
        for (const auto& a : c.dist.atoms()) {
            impl->atoms.push_back({c.weight * a.weight, a.mean, a.variance});
        }
    }
    impl->cdf = cumulative(weights);
    impl->components = std::move(components);
    return ScalarDistribution(std::move(impl));
}

ScalarDistribution::Kind ScalarDistribution::kind() const noexcept { return impl_->kind; }
double ScalarDistribution::mean() const noexcept { return impl_->mean; }
double ScalarDistribution::variance() const noexcept { return impl_->variance; }
double ScalarDistribution::second_moment() const noexcept {
    return impl_->variance + impl_->mean * impl_->mean;
}
int ScalarDistribution::depth() const noexcept { return impl_->depth; }

double ScalarDistribution::gaussian_mean() const {
    require(impl_->kind == Kind::gaussian, "not a Gaussian distribution");
    return impl_->g_mean;
}

double ScalarDistribution::gaussian_variance() const {
    require(impl_->kind == Kind::gaussian, "not a Gaussian distribution");
    return impl_->g_variance;
}

std::span<const double> ScalarDistribution::points() const {
    require(impl_->kind == Kind::discrete, "not a discrete distribution");
    return impl_->points;
}

std::span<const double> ScalarDistribution::probs() const {
    require(impl_->kind == Kind::discrete, "not a discrete distribution");
    return impl_->probs;
}

std::span<const ScalarDistribution::Component> ScalarDistribution::components() const {
    require(impl_->kind == Kind::mixture, "not a mixture distribution");
    return impl_->components;
}

std::span<const GaussianAtom> ScalarDistribution::atoms() const noexcept { return impl_->atoms; }

ScalarDistribution ScalarDistribution::scaled(double factor) const {
    require(std::isfinite(factor), "scale factor must be finite");
    switch (impl_->kind) {
        case Kind::gaussian:
            return gaussian(factor * impl_->g_mean, factor * factor * impl_->g_variance);
        case Kind::discrete: {
            if (factor == 0.0) return discrete({0.0}, {1.0});
            std::vector<double> pts = impl_->points;
            for (double& p : pts) p *= factor;
            return discrete(std::move(pts), impl_->probs);
        }
        case Kind::mixture: {
            std::vector<Component> comps;
            for (const auto& c : impl_->components) comps.push_back({c.weight, c.dist.scaled(factor)});
            return mixture(std::move(comps));
        }
    }
    throw Error(ErrorCode::internal, "unreachable distribution kind");
}

double ScalarDistribution::sample(RandomStream& stream) const {
    switch (impl_->kind) {
        case Kind::gaussian:
            return impl_->g_mean + std::sqrt(impl_->g_variance) * stream.normal();
        case Kind::discrete:
            if (impl_->points.size() == 1) return impl_->points.front();
            return impl_->points[pick(impl_->cdf, stream.uniform())];
        case Kind::mixture:
            return impl_->components[pick(impl_->cdf, stream.uniform())].dist.sample(stream);
    }
    return 0.0;
}

double variance(const ScalarDistribution& d) noexcept { return d.variance(); }

double entropy_discrete(const ScalarDistribution& d) {
    require(d.kind() == ScalarDistribution::Kind::discrete, "entropy_discrete: distribution is not discrete");
    double h = 0.0;
    for (double p : d.probs()) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

double sample(const ScalarDistribution& d, RandomStream& stream) { return d.sample(stream); }

ScalarDistribution bpsk() { return ScalarDistribution::discrete({-1.0, 1.0}, {0.5, 0.5}); }

ScalarDistribution pam(int order) {
    require(order >= 2 && order <= 1024, "pam: order must be in [2, 1024]");
    std::vector<double> pts(static_cast<std::size_t>(order));
    std::vector<double> probs(pts.size(), 1.0 / order);
    // Levels ±1, ±3, ... have mean square (order²-1)/3.
    const double scale = 1.0 / std::sqrt((static_cast<double>(order) * order - 1.0) / 3.0);
    for (int i = 0; i < order; ++i) pts[static_cast<std::size_t>(i)] = (2.0 * i - (order - 1)) * scale;
    // Make the probabilities sum to exactly one.
    double rest = 1.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) rest -= probs[i];
    probs.back() = rest;
    return ScalarDistribution::discrete(std::move(pts), std::move(probs));
}

ScalarDistribution gaussian_mixture_example() {
    return ScalarDistribution::mixture({{0.5, ScalarDistribution::gaussian(-0.8, 0.36)},
                                        {0.5, ScalarDistribution::gaussian(0.8, 0.36)}});
}

std::optional<ScalarDistribution> preset(std::string_view name) {
    if (name == "gaussian") return ScalarDistribution::gaussian(0.0, 1.0);
    if (name == "bpsk") return bpsk();
    if (name == "4pam") return pam(4);
    if (name == "8pam") return pam(8);
    if (name == "16pam") return pam(16);
    if (name == "gmix") return gaussian_mixture_example();
    if (name == "zero") return ScalarDistribution::discrete({0.0}, {1.0});
    return std::nullopt;
}

ScalarDistribution normalized_to_unit_variance(const ScalarDistribution& d) {
    const double v = d.variance();
    if (v <= 0.0) return d;
    return d.scaled(1.0 / std::sqrt(v));
}

double min_point_spacing(const ScalarDistribution& d) {
    std::vector<double> pts(d.points().begin(), d.points().end());
    std::sort(pts.begin(), pts.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < pts.size(); ++i) best = std::min(best, pts[i] - pts[i - 1]);
    return best;
}

}  // namespace giclab
