#pragma once

#include <optional>

#include "giclab/dists.hpp"
#include "giclab/mmse.hpp"

namespace giclab {

// Two-user Gaussian interference channel
//   y₁ = √snr₁·x + √(a·snr₂)·z + n₁,   y₂ = √(b·snr₁)·x + √snr₂·z + n₂
// with unit-power inputs, 0 < a < 1 and b ≥ 0.
struct InterferenceParams {
    double snr1 = 1.0;
    double snr2 = 1.0;
    double a = 0.5;
    double b = 0.0;

    void validate() const;
};

// Rates in nats.
struct RatePair {
    double rx = 0.0;
    double rz = 0.0;
};

// γ' = γ·a·snr₂ / (1 + γ·snr₁): the SNR at which z is seen through y(γ) once x
// acts as Gaussian noise.
double effective_snr(double gamma, const InterferenceParams& p);

// dI(z; y(γ))/dγ = ½·mmse(z, γ')·a·snr₂/(1+γ·snr₁)² for γ ∈ [0, 1). z is
// normalized to unit variance (with a warning) first.
double interference_mi_derivative(const ScalarDistribution& z, double gamma, const InterferenceParams& p,
                                  const QuadratureSpec& q = {});

// I(z; y(γ)) = mutual_information(z, γ') for γ ≤ 1, held at the γ = 1 value
// beyond (x is then decoded and the derivative vanishes).
double interference_mi(const ScalarDistribution& z, double gamma, const InterferenceParams& p,
                       const QuadratureSpec& q = {});

struct ChainRuleReport {
    double via_interference = 0.0;  // I(z; y(γ)) + ½ln(1+γ·snr₁)
    double via_joint = 0.0;         // ½ln(1+γ·snr₁+γ·a·snr₂)
    double gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Two routes to I(w; y(γ)) for Gaussian z. Rejects other laws.
ChainRuleReport chain_rule_check(const ScalarDistribution& z, double gamma, const InterferenceParams& p,
                                 double tol);

// MMSE(w | y(γ)) = snr₁/(1+γ·snr₁) + a·snr₂/(1+γ·snr₁)²·mmse(z, γ') on [0, 1).
double mmse_w(const ScalarDistribution& z, double gamma, const InterferenceParams& p,
              const QuadratureSpec& q = {});

// a·snr₂/(1+snr₁): above this SNR the MMSE of z vanishes.
double zero_mmse_threshold(const InterferenceParams& p);

// (½ln(1+snr₁), ½ln(1+a·snr₂/(1+snr₁))). Warns if b ≠ 0.
RatePair corner_point_z(const InterferenceParams& p);

struct WeakCorners {
    RatePair first;   // x at its point-to-point rate
    RatePair second;  // z at its point-to-point rate
};

// Requires 0 < b < 1.
WeakCorners corner_points_weak(const InterferenceParams& p);

struct MixedCorner {
    RatePair corner;
    RatePair mac_bound;  // (½ln(1+snr₁), ½ln((1+snr₂+b·snr₁)/(1+snr₁)))
};

// Requires b ≥ 1.
MixedCorner corner_point_mixed(const InterferenceParams& p);

struct BInterval {
    double lo;
    double hi;
};

// Annotation only: [1, (1-a+snr₁)/(a·snr₁)] when that interval is non-empty.
std::optional<BInterval> tin_b_interval(const InterferenceParams& p);

}  // namespace giclab
