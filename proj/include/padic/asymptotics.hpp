#pragma once

#include <complex>
#include <functional>

#include "padic/core.hpp"
#include "padic/spectrum.hpp"

namespace padic {

// Lanczos (g=7, 9 terms) in log form, reflection for Re z < 1/2.
// Throws NumericalError("pole proximity") within 1e-12 of a nonpositive integer.
std::complex<double> complex_lgamma(std::complex<double> z);
std::complex<double> complex_gamma(std::complex<double> z);

// S(t) = sum_{n>=1} a^{-n} n^{-k} exp(-b^{-n} t)
struct LogPeriodicSpec {
    double a = 2.0;
    double b = 4.0;
    int k = 0;
    int M = 5;
};

struct AsymptoteResult {
    double value = 0.0;
    double leading_exponent = 0.0;  // power of t
    double log_period = 0.0;        // period in ln t
    int modes_used = 0;
    double imag_residue = 0.0;      // |Im| of the mode sum relative to |value|
    bool truncation_warning = false;
};

// (ln b)^{k-1} (ln t)^{-k} t^{-ln a/ln b} sum_{|m|<=M} exp(2 pi i m ln t/ln b) Gamma(ln a/ln b - 2 pi i m/ln b)
AsymptoteResult log_periodic_sum(const LogPeriodicSpec& spec, double t);

// brute-force S(t), summed until the geometric tail is below 1e-17 of the sum
double log_periodic_direct(const LogPeriodicSpec& spec, double t);

// sum_{|m|<=M} exp(i m w x) Gamma(beta - i m w) c(m), with c(-m) = conj(c(m)).
struct ModeSum {
    double value = 0.0;
    double imag = 0.0;
    bool truncated = false;
};
ModeSum mode_sum(double beta, double w, double x, int M,
                 const std::function<std::complex<double>(int)>& c = nullptr);

// I_0: limit of the shifted residue numerator,
// (1-1/p) sum_{n=0}^{nu-r-1} p^{(alpha-1)n} + p^{(alpha-1)(nu-r)} p^{-alpha}
double i0_constant(const ModelParams& m);

// sum_{n in Z} p^n / (p^{alpha n} - p^{-alpha} - delta)^2, alpha > 1/2
SeriesValue lattice_sum_sq(const ModelParams& m, double delta);

struct FAsymptoteConstants {
    double A = 0.0;        // f ~ A * (log-periodic sum in tau)
    double Lambda = 0.0;   // tau = Lambda * t
    double beta = 0.0;
    int k = 0;             // power of n in the log-periodic sum (2 at alpha = 1)
    double b = 0.0;        // p^alpha
};
FAsymptoteConstants f_asymptote_constants(const ModelParams& m, const DeltaLimit& lim);

AsymptoteResult f_asymptote(double t, const ModelParams& m, const DeltaLimit& lim, int M = 5);

// alpha < 1: mu(infinity) = p^r B E(0) = F(0)/(1 - F_ret(0))
double mu_limit(const ModelParams& m);
// the closed-form constant (p^r/|a|)^2 (p-1)^2/((p^{1-alpha}-1)(p^{1+alpha}-1)) taken literally
double mu_limit_literal(const ModelParams& m);
// alpha = 1: d mu / d ln t -> (p-1)/((p+1) ln p)
double mu_log_slope(const ModelParams& m);
// the same coefficient with the extra 1/|a| of the literal closed form
double mu_log_slope_literal(const ModelParams& m);

// alpha = 1 carries no additive constant: only increments in ln t are meaningful.
AsymptoteResult mu_asymptote(double t, const ModelParams& m, int M = 5);

// Slope of ln g against ln t after averaging ln g over one log-period window.
// Samples ln t on [ln_t0, ln_t0 + periods*period] with n_per points per period.
struct SlopeFit {
    double slope = 0.0;
    double rms = 0.0;  // residual rms of the averaged curve about the line
    int windows = 0;
};
SlopeFit period_averaged_slope(const std::function<double(double)>& g, double ln_t0, double period, int periods,
                               int n_per = 64);

}  // namespace padic
