#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "giclab/dists.hpp"
#include "giclab/mmse.hpp"

namespace giclab {

// A capacity-achieving point-to-point code designed for reliable decoding at
// design_snr, observed through AWGN at γ·design_snr.
class GoodCodeProfile {
public:
    explicit GoodCodeProfile(double design_snr);
    double design_snr() const noexcept { return design_snr_; }

private:
    double design_snr_;
};

enum class CurveKind { mutual_information_nats, mutual_information_bits, mmse, derivative_nats, derivative_bits };

const char* to_string(CurveKind kind) noexcept;

struct CurveSample {
    double abscissa;
    double value;
    CurveKind kind;
};

// Columns "x","y","kind"; values printed with 17 significant digits.
void write_curve_csv(std::ostream& out, std::span<const CurveSample> samples);

// Nats. Gaussian inputs use ½ln(1 + snr·v); others integrate ½·mmse.
double mutual_information(const ScalarDistribution& d, double snr, const QuadratureSpec& q = {});

// ½∫₀^snr mmse_quadrature(d, γ) dγ by adaptive Simpson (abs tol 1e-9, depth 40)
// for every kind of input, Gaussian included.
double mutual_information_integrated(const ScalarDistribution& d, double snr, const QuadratureSpec& q = {});

// h(Y) - h(N) by Gauss-Hermite quadrature of the output density. Independent
// of the MMSE path; used by verify_immse.
double mutual_information_direct(const ScalarDistribution& d, double snr, const QuadratureSpec& q = {});

// ½ln(1+γ·snr) on [0,1], ½ln(1+snr) beyond.
double good_code_mi(const GoodCodeProfile& profile, double gamma);

// 1/(1+γ·snr) on [0,1), 0 for γ ≥ 1.
double good_code_mmse(const GoodCodeProfile& profile, double gamma);

// Both curves on `points` equally spaced γ values in [start, stop].
std::vector<CurveSample> good_code_curve(const GoodCodeProfile& profile, double start, double stop, int points);

struct ImmsePoint {
    double snr;
    double derivative;  // central difference of mutual_information_direct
    double half_mmse;
    double abs_error;
};

struct ImmseReport {
    std::vector<ImmsePoint> points;
    double max_abs_error = 0.0;
    double worst_snr = 0.0;
    double tolerance = 0.0;
    double step = 0.0;
    bool pass = false;
};

// Checks dI/dsnr = ½·mmse on grid points snr_max·i/(grid-1), i ≥ 1.
ImmseReport verify_immse(const ScalarDistribution& d, double snr_max, int grid, double tol,
                         const QuadratureSpec& q = {});

// Maximizes (1/n)Σ λ/(1+γλ) over λ ≥ 0 with (1/n)Σλ ≤ trace_budget by
// projected gradient ascent (Barzilai-Borwein steps, Armijo backtracking).
std::vector<double> max_trace_mmse_spectrum(int n, double gamma, double trace_budget);

// Euclidean projection onto {λ ≥ 0, Σλ ≤ total}.
std::vector<double> project_capped_simplex(std::span<const double> v, double total);

}  // namespace giclab
