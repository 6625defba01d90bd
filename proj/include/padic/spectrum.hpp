#pragma once

#include <vector>

#include "padic/core.hpp"
#include "padic/transforms.hpp"

namespace padic {

struct SpectralLine {
    int k = 0;
    double lambda = 0.0;
    double delta = 0.0;     // lambda = p^{-alpha(r+k)} (p^{-alpha} + delta)
    double residue = 0.0;   // b_k
    double residue_err = 0.0;  // absolute error estimate of b_k (rounding + root error)
    double residual = 0.0;     // |J_r(-lambda)| / |J_r'(-lambda)|, a relative root displacement
};

// bracket for delta_k: (1-p^-alpha)/(1+p a_k) < delta_k < 1/((p-1) a_k)
struct DeltaBracket {
    double a_k = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};
DeltaBracket delta_bracket(int k, const ModelParams& m);

// Root of J_r(-lambda) = 0 in (p^{-alpha(r+k+1)}, p^{-alpha(r+k)}), found by
// bisection in delta over delta_bracket. Fills lambda, delta, residual.
SpectralLine solve_lambda(int k, const ModelParams& m);

struct ResidueDetail {
    double value = 0.0;          // chosen route
    double err = 0.0;            // absolute error estimate
    double compact = 0.0;        // I(-lambda)/|J'(-lambda)| evaluated directly in lambda; NaN if out of range
    double compact_err = 0.0;
    double shifted_I = 0.0;      // delta-scaled numerator via I
    double shifted_E = 0.0;      // delta-scaled numerator via -E (equal to I at a root)
    double cond_I = 0.0;         // sum|terms|/|sum| of the numerators
    double cond_E = 0.0;
};

// b_k = I(-lambda_k)/|J_r'(-lambda_k)|; throws NumericalError("route disagreement")
// if the compact and shifted evaluations differ beyond their error estimates.
ResidueDetail residue_detail(const SpectralLine& line, const ModelParams& m);
double residue_b(const SpectralLine& line, const ModelParams& m);

struct Spectrum {
    ModelParams params;
    std::vector<SpectralLine> lines;
    int K = 0;
    double f0 = 0.0;          // closed-form total mass sum_k b_k
    double sum_b = 0.0;
    double tail_bound = 0.0;  // >= |f0 - sum_b| including rounding allowances
    double rounding = 0.0;    // the rounding part of tail_bound
};

// largest k whose lambda_k stays well inside binary64 range
int max_spectrum_k(const ModelParams& m);

// K >= nu - r. If target_tail > 0, K grows until tail_bound <= target_tail (cap 400).
Spectrum build_spectrum(const ModelParams& m, int K, double target_tail = 0.0);

double f_series(double t, const Spectrum& sp);
double f_cdf_series(double t, const Spectrum& sp);
// -sum lambda_k b_k
double f_prime0_series(const Spectrum& sp);
double sum_b_over_lambda(const Spectrum& sp);
// F(s) - sum_{k<=K} b_k/(s+lambda_k) lies in [0, tail_bound/s] for s > 0 once residues are positive
double f_laplace_partial(double s, const Spectrum& sp);

// ---- first return ----

struct ReturnSpectrum {
    ModelParams params;
    std::vector<double> lambda;
    std::vector<double> coef;   // residue at -lambda_k
    double B = 0.0;
    double coef_B = 0.0;        // residue at -B
    bool has_B_pole = true;
    double tail_bound = 0.0;    // |sum of dropped coefficients|, from sum of all coefficients = 0
};

ReturnSpectrum build_return_spectrum(const ModelParams& m, int K);

struct ShadowedValue {
    double value = 0.0;    // reported value (inversion wins when flagged)
    double series = 0.0;
    double shadow = 0.0;
    bool flagged = false;
};

double f_ret_partial(double t, const ReturnSpectrum& rs);
// Talbot inversion of F_ret in complex double
double f_ret_talbot(double t, const ModelParams& m, int M = 24);
ShadowedValue f_ret_series(double t, const ReturnSpectrum& rs, double rel_tol = 1e-6);
// grid evaluation, shadowing every stride-th point plus the last
std::vector<double> f_ret_grid(const std::vector<double>& t, const ReturnSpectrum& rs, int stride, int* flagged = nullptr);

// ---- delta limits ----

struct DeltaLimit {
    double limit = 0.0;
    double cauchy = 0.0;     // max successive difference over the last 5 terms
    bool converged = true;
    std::vector<double> sequence;
};

// alpha>1: lim delta_k; alpha=1: lim k delta_k; alpha<1: lim p^{(1-alpha)k} delta_k.
DeltaLimit delta_limit(const ModelParams& m, int k_max);

}  // namespace padic
