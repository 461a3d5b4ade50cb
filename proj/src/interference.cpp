#include "giclab/interference.hpp"

#include <cmath>
#include <string>

#include "giclab/error.hpp"
#include "giclab/immse.hpp"

namespace giclab {

namespace {

constexpr double kUnitVarianceTolerance = 1e-9;

void check_gamma(double gamma) {
    if (!std::isfinite(gamma) || gamma < 0.0) throw InvalidArgument("gamma must be finite and >= 0");
}

ScalarDistribution unit_interference(const ScalarDistribution& z) {
    const double v = z.variance();
    if (std::abs(v - 1.0) <= kUnitVarianceTolerance) return z;
    if (v == 0.0) {
        warn("interference law has zero variance; it is used as given");
        return z;
    }
    warn("interference law has variance " + std::to_string(v) + "; normalizing to unit variance");
    return normalized_to_unit_variance(z);
}

double half_log1p(double x) { return 0.5 * std::log1p(x); }

}  // namespace

void InterferenceParams::validate() const {
    if (!std::isfinite(snr1) || snr1 <= 0.0) throw InvalidArgument("snr1 must be finite and > 0");
    if (!std::isfinite(snr2) || snr2 <= 0.0) throw InvalidArgument("snr2 must be finite and > 0");
    if (!std::isfinite(a) || a <= 0.0 || a >= 1.0) throw InvalidArgument("a must lie strictly inside (0, 1)");
    if (!std::isfinite(b) || b < 0.0) throw InvalidArgument("b must be finite and >= 0");
}

double effective_snr(double gamma, const InterferenceParams& p) {
    p.validate();
    check_gamma(gamma);
    return gamma * p.a * p.snr2 / (1.0 + gamma * p.snr1);
}

double interference_mi_derivative(const ScalarDistribution& z, double gamma, const InterferenceParams& p,
                                  const QuadratureSpec& q) {
    p.validate();
    check_gamma(gamma);
    if (gamma >= 1.0) {
        throw InvalidArgument("interference_mi_derivative: gamma must be < 1 (use interference_mi beyond)");
    }
    const auto zu = unit_interference(z);
    const double t = 1.0 + gamma * p.snr1;
    return 0.5 * mmse(zu, effective_snr(gamma, p), q) * p.a * p.snr2 / (t * t);
}

double interference_mi(const ScalarDistribution& z, double gamma, const InterferenceParams& p,
                       const QuadratureSpec& q) {
    p.validate();
    check_gamma(gamma);
    const auto zu = unit_interference(z);
    return mutual_information(zu, effective_snr(std::min(gamma, 1.0), p), q);
}

ChainRuleReport chain_rule_check(const ScalarDistribution& z, double gamma, const InterferenceParams& p,
                                 double tol) {
    p.validate();
    if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0) {
        throw InvalidArgument("chain_rule_check: gamma must lie in [0, 1]");
    }
    if (z.kind() != ScalarDistribution::Kind::gaussian) {
        throw InvalidArgument("chain_rule_check: both routes have closed forms only for Gaussian z");
    }
    ChainRuleReport r;
    r.tolerance = tol;
    r.via_interference = interference_mi(z, gamma, p) + half_log1p(gamma * p.snr1);
    r.via_joint = half_log1p(gamma * p.snr1 + gamma * p.a * p.snr2);
    r.gap = std::abs(r.via_interference - r.via_joint);
    r.pass = r.gap < tol;
    return r;
}

double mmse_w(const ScalarDistribution& z, double gamma, const InterferenceParams& p, const QuadratureSpec& q) {
    p.validate();
    check_gamma(gamma);
    if (gamma >= 1.0) throw InvalidArgument("mmse_w: gamma must be < 1");
    const auto zu = unit_interference(z);
    const double t = 1.0 + gamma * p.snr1;
    return p.snr1 / t + p.a * p.snr2 / (t * t) * mmse(zu, effective_snr(gamma, p), q);
}

double zero_mmse_threshold(const InterferenceParams& p) {
    p.validate();
    return p.a * p.snr2 / (1.0 + p.snr1);
}

RatePair corner_point_z(const InterferenceParams& p) {
    p.validate();
    if (p.b != 0.0) warn("corner_point_z: b = " + std::to_string(p.b) + " is ignored (one-sided channel has b = 0)");
    return {half_log1p(p.snr1), half_log1p(p.a * p.snr2 / (1.0 + p.snr1))};
}

WeakCorners corner_points_weak(const InterferenceParams& p) {
    p.validate();
    if (!(p.b > 0.0 && p.b < 1.0)) throw InvalidArgument("corner_points_weak: b must lie in (0, 1)");
    WeakCorners c;
    c.first = {half_log1p(p.snr1), half_log1p(p.a * p.snr2 / (1.0 + p.snr1))};
    c.second = {half_log1p(p.b * p.snr1 / (1.0 + p.snr2)), half_log1p(p.snr2)};
    return c;
}

MixedCorner corner_point_mixed(const InterferenceParams& p) {
    p.validate();
    if (!(p.b >= 1.0)) throw InvalidArgument("corner_point_mixed: b must be >= 1");
    MixedCorner c;
    c.corner = {half_log1p(p.snr1), half_log1p(p.a * p.snr2 / (1.0 + p.snr1))};
    // ½ln((1+snr₂+b·snr₁)/(1+snr₁)) = ½ln(1 + (snr₂+(b-1)·snr₁)/(1+snr₁)).
    c.mac_bound = {half_log1p(p.snr1), half_log1p((p.snr2 + (p.b - 1.0) * p.snr1) / (1.0 + p.snr1))};
    return c;
}

std::optional<BInterval> tin_b_interval(const InterferenceParams& p) {
    p.validate();
    const double hi = (1.0 - p.a + p.snr1) / (p.a * p.snr1);
    if (hi < 1.0) return std::nullopt;
    return BInterval{1.0, hi};
}

}  // namespace giclab
