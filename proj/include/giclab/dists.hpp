#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "giclab/rng.hpp"

namespace giclab {

// One Gaussian piece of a flattened law. A discrete point is an atom with
// zero variance, so every supported law is a finite Gaussian mixture.
struct GaussianAtom {
    double weight;
    double mean;
    double variance;
};

struct MixtureComponent;

// Scalar input law: Gaussian, finite discrete, or a mixture of those (nesting
// depth at most 2). Immutable once constructed; copies share storage.
class ScalarDistribution {
public:
    enum class Kind { gaussian, discrete, mixture };

    using Component = MixtureComponent;

    static ScalarDistribution gaussian(double mean, double variance);
    static ScalarDistribution discrete(std::vector<double> points, std::vector<double> probs);
    static ScalarDistribution mixture(std::vector<Component> components);

    Kind kind() const noexcept;
    double mean() const noexcept;
    double variance() const noexcept;
    double second_moment() const noexcept;

    // Mixture nesting depth: 0 for Gaussian/discrete, 1 + max over components otherwise.
    int depth() const noexcept;

    // Gaussian parameters; throws InvalidArgument for other kinds.
    double gaussian_mean() const;
    double gaussian_variance() const;

    // Discrete support; throws InvalidArgument for other kinds.
    std::span<const double> points() const;
    std::span<const double> probs() const;

    // Mixture components; throws InvalidArgument for other kinds.
    std::span<const Component> components() const;

    // Flattened Gaussian atoms with strictly positive weights.
    std::span<const GaussianAtom> atoms() const noexcept;

    // Law of c·X.
    ScalarDistribution scaled(double factor) const;

    // One draw. Consumes a kind-dependent number of values from the stream.
    double sample(RandomStream& stream) const;

private:
    struct Impl;
    explicit ScalarDistribution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

struct MixtureComponent {
    double weight;
    ScalarDistribution dist;
};

double variance(const ScalarDistribution& d) noexcept;

// Shannon entropy in nats. Throws InvalidArgument unless d is Discrete.
double entropy_discrete(const ScalarDistribution& d);

double sample(const ScalarDistribution& d, RandomStream& stream);

// Unit-power, zero-mean constellations.
ScalarDistribution bpsk();
ScalarDistribution pam(int order);

// Two-component unit-variance Gaussian mixture 0.5·N(-0.8, 0.36) + 0.5·N(0.8, 0.36).
ScalarDistribution gaussian_mixture_example();

// Named laws: "gaussian", "bpsk", "4pam", "8pam", "16pam", "gmix", "zero".
std::optional<ScalarDistribution> preset(std::string_view name);

// Rescale to unit variance. Laws with zero variance are returned unchanged.
ScalarDistribution normalized_to_unit_variance(const ScalarDistribution& d);

// Smallest distance between support points of a Discrete law (infinity for a point mass).
double min_point_spacing(const ScalarDistribution& d);

}  // namespace giclab
