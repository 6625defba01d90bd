#include "padic/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/constants/constants.hpp>

namespace padic {

namespace {

using cd = std::complex<double>;
const double kPi = boost::math::constants::pi<double>();

const double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                            771.32342877765313,   -176.61502916214059,   12.507343278686905,
                            -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

void check_pole(cd z) {
    const double n = std::round(z.real());
    if (n <= 0.0 && std::abs(z - cd(n, 0.0)) < 1e-12)
        throw NumericalError("pole proximity", "Gamma argument within 1e-12 of the pole at " + std::to_string(int(n)));
}

cd lgamma_right(cd z) {
    // Re z >= 1/2
    z -= 1.0;
    cd x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
    const cd t = z + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cd complex_lgamma(cd z) {
    check_pole(z);
    if (z.real() < 0.5) return std::log(kPi / std::sin(kPi * z)) - lgamma_right(1.0 - z);
    return lgamma_right(z);
}

cd complex_gamma(cd z) {
    check_pole(z);
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * std::exp(lgamma_right(1.0 - z)));
    return std::exp(lgamma_right(z));
}

ModeSum mode_sum(double beta, double w, double x, int M, const std::function<cd(int)>& c) {
    if (M < 0) throw ValidationError({"mode count M must be >= 0"});
    auto term = [&](int m) {
        const cd g = complex_gamma(cd(beta, -m * w));
        const cd cm = c ? c(m) : cd(1.0);
        return std::exp(cd(0.0, m * w * x)) * g * cm;
    };
    cd sum = term(0);
    const double c0 = std::abs(sum);
    double last = 0.0;
    for (int m = 1; m <= M; ++m) {
        const cd tp = term(m), tm = term(-m);
        sum += tp + tm;
        last = std::max(std::abs(tp), std::abs(tm));
    }
    ModeSum out;
    out.value = sum.real();
    out.imag = std::fabs(sum.imag());
    // c(0) may vanish; then the first mode is the reference
    const double ref = c0 > 0 ? c0 : (M >= 1 ? std::abs(term(1)) : 0.0);
    out.truncated = M >= 1 && last > 1e-14 * ref;
    return out;
}

AsymptoteResult log_periodic_sum(const LogPeriodicSpec& s, double t) {
    if (!(s.a > 1.0) || !(s.b > 1.0)) throw ValidationError({"log-periodic sum needs a > 1 and b > 1"});
    if (s.k < 0) throw ValidationError({"k must be >= 0"});
    if (!(t > 1.0)) throw ValidationError({"log-periodic asymptote needs t > 1"});
    const double lb = std::log(s.b), lt = std::log(t);
    const double beta = std::log(s.a) / lb;
    const ModeSum ms = mode_sum(beta, 2.0 * kPi / lb, lt, s.M);
    AsymptoteResult out;
    out.value = std::pow(lb, s.k - 1) * std::pow(lt, -s.k) * std::exp(-beta * lt) * ms.value;
    out.leading_exponent = -beta;
    out.log_period = lb;
    out.modes_used = 2 * s.M + 1;
    out.imag_residue = ms.value != 0 ? ms.imag / std::fabs(ms.value) : ms.imag;
    out.truncation_warning = ms.truncated;
    return out;
}

double log_periodic_direct(const LogPeriodicSpec& s, double t) {
    if (!(s.a > 1.0) || !(s.b > 1.0)) throw ValidationError({"log-periodic series needs a > 1 and b > 1"});
    if (t < 0) throw ValidationError({"t must be >= 0"});
    const double la = std::log(s.a), lb = std::log(s.b);
    double sum = 0.0, comp = 0.0;
    for (int n = 1; n < 1000000; ++n) {
        const double x = std::exp(-n * lb) * t;
        const double term = std::exp(-n * la - s.k * std::log(double(n)) - x);
        const double y = term - comp;
        const double z = sum + y;
        comp = (z - sum) - y;
        sum = z;
        // remaining terms are below a^{-n} n^{-k} and shrink by at least 1/a
        if (x < 1.0) {
            const double tail = std::exp(-n * la - s.k * std::log(double(n))) / (s.a - 1.0);
            if (tail <= 1e-17 * sum) return sum;
        }
    }
    throw NumericalError("tolerance not met", "log-periodic direct series");
}

double i0_constant(const ModelParams& m) {
    const double p = m.p, a = m.alpha;
    double s = 0.0;
    for (int n = 0; n <= m.nu - m.r - 1; ++n) s += std::pow(p, (a - 1.0) * n);
    return (1.0 - 1.0 / p) * s + std::pow(p, (a - 1.0) * (m.nu - m.r)) * std::pow(p, -a);
}

SeriesValue lattice_sum_sq(const ModelParams& m, double delta) {
    if (!(m.alpha > 0.5)) throw ValidationError({"lattice sum of squares needs alpha > 1/2"});
    const double p = m.p, a = m.alpha;
    const double c = std::pow(p, -a) + delta;
    if (!(delta > 0.0)) throw ValidationError({"delta must be > 0"});
    auto term = [&](int n) {
        const double d = std::pow(p, a * n) - c;
        return std::pow(p, n) / (d * d);
    };
    double sum = term(0), tb_pos = INFINITY, tb_neg = INFINITY;
    const double rho = std::pow(p, 1.0 - 2.0 * a);
    for (int n = 1; n < 5000; ++n) {
        if (tb_pos > 1e-17 * sum) {
            sum += term(n);
            if (std::pow(p, a * (n + 1)) >= 2.0 * c) tb_pos = 4.0 * std::pow(rho, n + 1) / (1.0 - rho);
        }
        if (tb_neg > 1e-17 * sum) {
            sum += term(-n);
            if (std::pow(p, -a * (n + 1)) <= c / 2.0) tb_neg = 4.0 * std::pow(p, -(n + 1)) / (c * c) / (1.0 - 1.0 / p);
        }
        if (tb_pos <= 1e-17 * sum && tb_neg <= 1e-17 * sum) return {sum, tb_pos + tb_neg, true, 2 * n + 1};
    }
    throw NumericalError("tolerance not met", "lattice sum of squares");
}

FAsymptoteConstants f_asymptote_constants(const ModelParams& m, const DeltaLimit& lim) {
    const double p = m.p, a = m.alpha, q = 1.0 - 1.0 / p;
    const double I0 = i0_constant(m);
    const double par = std::pow(p, -a * m.r);
    FAsymptoteConstants c;
    c.b = std::pow(p, a);
    if (a > 1.0) {
        const double D = lim.limit;
        c.A = par * I0 / (q * lattice_sum_sq(m, D).value);
        c.Lambda = par * (std::pow(p, -a) + D);
        c.beta = (2.0 * a - 1.0) / a;
    } else {
        const double D = lim.limit;
        c.A = p * par * I0 * D * D / q;
        c.Lambda = par * std::pow(p, -a);
        c.beta = 1.0 / a;
        if (a == 1.0) c.k = 2;
    }
    return c;
}

AsymptoteResult f_asymptote(double t, const ModelParams& m, const DeltaLimit& lim, int M) {
    if (!lim.converged) throw NumericalError("non-convergence", "delta limit did not converge");
    const auto c = f_asymptote_constants(m, lim);
    LogPeriodicSpec s;
    s.a = std::pow(c.b, c.beta);
    s.b = c.b;
    s.k = c.k;
    s.M = M;
    AsymptoteResult r = log_periodic_sum(s, c.Lambda * t);
    r.value *= c.A;
    return r;
}

double mu_limit(const ModelParams& m) {
    if (!(m.alpha < 1.0)) return INFINITY;
    const double p = m.p, a = m.alpha;
    const double ratio = pow_p(m.p, m.r) / norm_a(m);
    return std::pow(ratio, 1.0 - a) * (p - 1.0) * (p - std::pow(p, 1.0 - a)) /
           ((std::pow(p, a + 1.0) - 1.0) * (std::pow(p, 1.0 - a) - 1.0));
}

double mu_limit_literal(const ModelParams& m) {
    const double p = m.p, a = m.alpha;
    const double ratio = pow_p(m.p, m.r) / norm_a(m);
    return ratio * ratio * (p - 1.0) * (p - 1.0) / ((std::pow(p, 1.0 - a) - 1.0) * (std::pow(p, 1.0 + a) - 1.0));
}

double mu_log_slope(const ModelParams& m) {
    const double p = m.p;
    return (p - 1.0) / ((p + 1.0) * std::log(p));
}

double mu_log_slope_literal(const ModelParams& m) { return mu_log_slope(m) / norm_a(m); }

AsymptoteResult mu_asymptote(double t, const ModelParams& m, int M) {
    if (!(t > 0)) throw ValidationError({"t must be > 0"});
    const double p = m.p, a = m.alpha, lp = std::log(p);
    AsymptoteResult out;
    out.modes_used = 2 * M + 1;
    if (a == 1.0) {
        // eps ~ (1-1/p)/(|a| ln p) tau^{-1} sum_m tau^{i w m} Gamma(1 - i w m), tau = t/|a|, integrated termwise
        const double w = 2.0 * kPi / lp;
        const double x = std::log(t / norm_a(m));
        const ModeSum ms = mode_sum(1.0, w, x, M, [&](int k) { return k == 0 ? cd(0.0) : 1.0 / cd(0.0, k * w); });
        out.value = mu_log_slope(m) * (x + ms.value);
        out.leading_exponent = 0.0;
        out.log_period = lp;
        out.imag_residue = ms.imag / std::max(std::fabs(out.value), 1e-300);
        out.truncation_warning = ms.truncated;
        return out;
    }
    // p^r B int eps with eps from the log-periodic form; the same expression is the decaying part for alpha < 1
    const double w = 2.0 * kPi / (a * lp);
    const double x = std::log(t) - a * std::log(norm_a(m));
    const ModeSum ms = mode_sum(1.0 / a, w, x, M, [&](int k) { return 1.0 / cd((a - 1.0) * lp, 2.0 * kPi * k); });
    const double pref = pow_p(m.p, m.r) * b_alpha_r(m) * (1.0 - 1.0 / p) * std::pow(t, (a - 1.0) / a);
    const double osc = pref * ms.value;
    out.value = a > 1.0 ? osc : mu_limit(m) + osc;
    out.leading_exponent = a > 1.0 ? (a - 1.0) / a : 0.0;
    out.log_period = a * lp;
    out.imag_residue = pref * ms.imag / std::max(std::fabs(out.value), 1e-300);
    out.truncation_warning = ms.truncated;
    return out;
}

SlopeFit period_averaged_slope(const std::function<double(double)>& g, double ln_t0, double period, int periods,
                               int n_per) {
    if (periods < 2 || n_per < 4 || !(period > 0)) throw ValidationError({"slope fit needs >= 2 periods"});
    const int n = periods * n_per;
    const double h = period / n_per;
    std::vector<double> x(n + 1), y(n + 1);
    for (int j = 0; j <= n; ++j) {
        x[j] = ln_t0 + j * h;
        const double v = g(std::exp(x[j]));
        if (!(v > 0)) throw NumericalError("domain", "slope fit needs positive values");
        y[j] = std::log(v);
    }
    // window means over exactly one period (n_per points at spacing h)
    std::vector<double> cx, cy;
    for (int i = 0; i + n_per <= n + 1; ++i) {
        double sx = 0, sy = 0;
        for (int j = i; j < i + n_per; ++j) sx += x[j], sy += y[j];
        cx.push_back(sx / n_per);
        cy.push_back(sy / n_per);
    }
    const double N = cx.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < cx.size(); ++i) mx += cx[i], my += cy[i];
    mx /= N;
    my /= N;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < cx.size(); ++i) sxx += (cx[i] - mx) * (cx[i] - mx), sxy += (cx[i] - mx) * (cy[i] - my);
    SlopeFit out;
    out.slope = sxy / sxx;
    out.windows = int(cx.size());
    double ss = 0;
    for (size_t i = 0; i < cx.size(); ++i) {
        const double e = cy[i] - (my + out.slope * (cx[i] - mx));
        ss += e * e;
    }
    out.rms = std::sqrt(ss / N);
    return out;
}

}  // namespace padic
