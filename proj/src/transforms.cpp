#include "padic/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace padic {

void SeriesTolerance::check() const {
    if (!(rel_tol > 0.0)) throw ValidationError({"rel_tol must be > 0"});
    if (max_terms < 1) throw ValidationError({"max_terms must be >= 1"});
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

SeriesValue lattice(double s, const ModelParams& m, int n0, const SeriesTolerance& tol) {
    tol.check();
    SeriesValue out;
    if (s == 0.0 && m.alpha >= 1.0) {
        out.value = INFINITY;
        out.tail_bound = 0.0;
        return out;
    }
    bool ok = true;
    out.value = lattice_sum(s, m, n0, tol.rel_tol, tol.max_terms, &out.tail_bound, &ok, &out.terms);
    out.converged = ok;
    return out;
}

void require(const SeriesValue& v, const char* what) {
    if (!v.converged) throw NumericalError("tolerance not met", std::string(what) + " exhausted max_terms");
}

// sum_{n>=n0} coef(n) p^{-n} exp(-p^{-alpha n} t), |coef(n)| <= cbound for the tail.
template <class Coef>
SeriesValue exp_sum(double t, const ModelParams& m, int n0, Coef coef, double cbound, const SeriesTolerance& tol) {
    tol.check();
    SeriesValue out;
    double sum = 0.0;
    int i = 0;
    double tb = INFINITY;
    for (; i < tol.max_terms; ++i) {
        const int n = n0 + i;
        const double pn = std::pow(double(m.p), -n);
        const double lam = std::pow(double(m.p), -m.alpha * n);
        sum += coef(n, lam) * pn * std::exp(-lam * t);
        tb = cbound * (pn / m.p) / (1.0 - 1.0 / m.p);
        if (tb <= tol.rel_tol * std::fabs(sum) || tb < std::numeric_limits<double>::min()) {
            ++i;
            break;
        }
    }
    out.value = sum;
    out.tail_bound = tb;
    out.terms = i;
    out.converged = tb <= tol.rel_tol * std::fabs(sum) || tb < std::numeric_limits<double>::min();
    return out;
}

}  // namespace

SeriesValue eval_J(double s, const ModelParams& m, const SeriesTolerance& tol) {
    auto v = lattice(s, m, m.r, tol);
    require(v, "J_r");
    return v;
}

SeriesValue eval_Jprime(double s, const ModelParams& m, const SeriesTolerance& tol) {
    tol.check();
    if (s == 0.0 && m.alpha >= 0.5) return {-INFINITY, 0.0, true, 0};
    const double q = 1.0 - 1.0 / m.p;
    double sum = 0.0, tb = INFINITY;
    int i = 0;
    for (; i < tol.max_terms; ++i) {
        const int n = m.r + i;
        const double pn = std::pow(double(m.p), -n);
        const double lam = std::pow(double(m.p), -m.alpha * n);
        const double d = s + lam;
        if (std::fabs(d) < 1e-12 * lam) throw NumericalError("pole proximity", "J' near -p^{-alpha n}, n=" + std::to_string(n));
        sum -= q * pn / d / d;
        const double lam1 = lam * std::pow(double(m.p), -m.alpha);
        tb = INFINITY;
        if (s != 0.0 && lam1 <= std::fabs(s) / 2) tb = 4.0 * (pn / m.p) / (s * s);
        if (s >= 0.0 && m.alpha < 0.5) {
            const double g = q * std::pow(double(m.p), (2 * m.alpha - 1.0) * (n + 1)) /
                             (1.0 - std::pow(double(m.p), 2 * m.alpha - 1.0));
            tb = std::min(tb, g);
        }
        if (tb <= tol.rel_tol * std::fabs(sum)) {
            ++i;
            break;
        }
    }
    SeriesValue out{sum, tb, tb <= tol.rel_tol * std::fabs(sum), i};
    require(out, "J_r'");
    return out;
}

SeriesValue eval_E(double s, const ModelParams& m, const SeriesTolerance& tol) {
    auto v = lattice(s, m, m.nu, tol);
    require(v, "E");
    const double lam = std::pow(double(m.p), -m.alpha * (m.nu - 1));
    if (std::fabs(s + lam) < 1e-12 * lam) throw NumericalError("pole proximity", "E near -p^{-alpha(nu-1)}");
    v.value -= std::pow(double(m.p), -m.nu) / (s + lam);
    return v;
}

SeriesValue eval_F_passage_alt(double s, const ModelParams& m, const SeriesTolerance& tol) {
    const auto J = eval_J(s, m, tol);
    const double I = finite_part_I(s, m);
    if (std::isinf(J.value)) return {1.0, 0.0, true, J.terms};
    if (J.value == 0.0) throw NumericalError("denominator zero", "J_r(s)=0 at s=" + std::to_string(s));
    SeriesValue out;
    out.value = 1.0 - I / J.value;
    out.tail_bound = std::fabs(I) * J.tail_bound / (J.value * J.value);
    out.terms = J.terms;
    return out;
}

SeriesValue eval_F_passage(double s, const ModelParams& m, const SeriesTolerance& tol) {
    const auto alt = eval_F_passage_alt(s, m, tol);
    const auto J = eval_J(s, m, tol);
    if (std::isinf(J.value)) return alt;
    const auto E = eval_E(s, m, tol);
    const double direct = E.value / J.value;
    const double err_direct = (E.tail_bound + std::fabs(direct) * J.tail_bound) / std::fabs(J.value);
    const double I = finite_part_I(s, m);
    const double round = 1e3 * kEps * (std::fabs(E.value) + std::fabs(I) + std::fabs(J.value)) / std::fabs(J.value);
    const double allowed = err_direct + alt.tail_bound + round;
    if (std::fabs(direct - alt.value) > allowed)
        throw NumericalError("route disagreement", "E/J and 1-I/J differ beyond tolerance at s=" + std::to_string(s));
    // 1 - I/J cancels when F is small; E/J is then the better route
    if (std::fabs(alt.value) < 0.5) return {direct, err_direct, true, J.terms + E.terms};
    return alt;
}

SeriesValue eval_F_return(double s, const ModelParams& m, const SeriesTolerance& tol) {
    const auto J = eval_J(s, m, tol);
    if (std::isinf(J.value)) return {1.0, 0.0, true, J.terms};
    const double B = b_alpha_r(m);
    const double den = std::pow(double(m.p), m.r) * (B + s) * J.value;
    if (den == 0.0) throw NumericalError("denominator zero", "p^r(B+s)J_r(s)=0 at s=" + std::to_string(s));
    SeriesValue out;
    out.value = 1.0 - 1.0 / den;
    out.tail_bound = J.tail_bound / (std::fabs(den) * std::fabs(J.value));
    out.terms = J.terms;
    return out;
}

SeriesValue eval_G(double s, const ModelParams& m, const SeriesTolerance& tol) {
    auto E = eval_E(s, m, tol);
    const double c = std::pow(double(m.p), m.r) * (b_alpha_r(m) + s);
    E.value *= c;
    E.tail_bound *= std::fabs(c);
    return E;
}

SeriesValue eval_G_R(double s, const ModelParams& m, const SeriesTolerance& tol) {
    auto J = eval_J(s, m, tol);
    const double c = std::pow(double(m.p), m.r) * (b_alpha_r(m) + s);
    J.value = -1.0 + c * J.value;
    J.tail_bound *= std::fabs(c);
    return J;
}

SeriesValue flux_series(double t, Flux which, const ModelParams& m, const SeriesTolerance& tol) {
    if (t < 0) throw ValidationError({"t must be >= 0"});
    const double B = b_alpha_r(m);
    const double q = 1.0 - 1.0 / m.p;
    const double pr = std::pow(double(m.p), m.r);
    if (which == Flux::g_R) {
        const double cb = q * std::max(B, std::pow(double(m.p), -m.alpha * m.r));
        auto v = exp_sum(t, m, m.r, [&](int, double lam) { return q * (B - lam); }, cb, tol);
        require(v, "g_R");
        v.value *= pr;
        v.tail_bound *= pr;
        return v;
    }
    const double cb = q * std::max(B, std::pow(double(m.p), -m.alpha * m.nu));
    auto v = exp_sum(t, m, m.nu, [&](int, double lam) { return q * (B - lam); }, cb, tol);
    const double lam = std::pow(double(m.p), -m.alpha * (m.nu - 1));
    v.value -= std::pow(double(m.p), -m.nu) * (B - lam) * std::exp(-lam * t);
    v.converged = v.tail_bound <= tol.rel_tol * std::fabs(v.value) || v.converged;
    require(v, "g");
    v.value *= pr;
    v.tail_bound *= pr;
    return v;
}

SeriesValue epsilon_fund(double t, const ModelParams& m, const SeriesTolerance& tol) {
    if (t < 0) throw ValidationError({"t must be >= 0"});
    const double q = 1.0 - 1.0 / m.p;
    if (t == 0.0) return {0.0, 0.0, true, 0};
    auto v = exp_sum(t, m, m.nu, [&](int, double) { return q; }, q, tol);
    const double lam = std::pow(double(m.p), -m.alpha * (m.nu - 1));
    v.value -= std::pow(double(m.p), -m.nu) * std::exp(-lam * t);
    // the difference can be tiny next to the pieces; judge the tail against it
    v.converged = v.tail_bound <= tol.rel_tol * std::fabs(v.value) || v.tail_bound < 1e-300;
    if (!v.converged) {
        // small t: value ~ t * f0, far below the pieces; the absolute tail is what matters
        v.converged = v.tail_bound <= tol.rel_tol * std::pow(double(m.p), -m.nu);
    }
    require(v, "epsilon");
    return v;
}

SeriesValue survival_series(double t, Survival which, const ModelParams& m, const SeriesTolerance& tol) {
    if (t < 0) throw ValidationError({"t must be >= 0"});
    const double q = 1.0 - 1.0 / m.p;
    if (which == Survival::S_r) {
        auto v = epsilon_fund(t, m, tol);
        const double pr = std::pow(double(m.p), m.r);
        v.value *= pr;
        v.tail_bound *= pr;
        return v;
    }
    ModelParams mm = m;
    if (which == Survival::S_Zp) mm.r = 0;
    if (t == 0.0) return {1.0, 0.0, true, 0};
    auto v = exp_sum(t, mm, mm.r, [&](int, double) { return q; }, q, tol);
    require(v, "S");
    const double pr = std::pow(double(mm.p), mm.r);
    v.value *= pr;
    v.tail_bound *= pr;
    return v;
}

SeriesValue epsilon_integral(double t, const ModelParams& m, const SeriesTolerance& tol) {
    if (t < 0) throw ValidationError({"t must be >= 0"});
    tol.check();
    const double q = 1.0 - 1.0 / m.p;
    const double lam_last = std::pow(double(m.p), -m.alpha * (m.nu - 1));
    double sum = -std::pow(double(m.p), -m.nu) / lam_last * -std::expm1(-lam_last * t);
    double tb = INFINITY;
    int i = 0;
    const double geo = std::pow(double(m.p), m.alpha - 1.0);
    for (; i < tol.max_terms; ++i) {
        const int n = m.nu + i;
        const double lam = std::pow(double(m.p), -m.alpha * n);
        sum += q * std::pow(double(m.p), -n) / lam * -std::expm1(-lam * t);
        // 1-e^{-x} <= x and <= 1
        tb = t * std::pow(double(m.p), -(n + 1));
        if (m.alpha < 1.0) tb = std::min(tb, q * std::pow(double(m.p), (m.alpha - 1.0) * (n + 1)) / (1.0 - geo));
        if (tb <= tol.rel_tol * std::fabs(sum) || tb == 0.0) {
            ++i;
            break;
        }
    }
    SeriesValue out{sum, tb, tb <= tol.rel_tol * std::fabs(sum) || tb == 0.0, i};
    require(out, "integral of epsilon");
    return out;
}

double f0_closed(const ModelParams& m) {
    return kernel_const(m.p, m.alpha) * std::pow(double(m.p), m.r) / std::pow(double(m.p), (m.alpha + 1.0) * m.nu);
}

double F0_closed(const ModelParams& m) {
    if (m.alpha >= 1.0) return 1.0;
    const double p = m.p, a = m.alpha;
    return std::pow(p, (m.r - m.nu) * (1.0 - a)) * (std::pow(p, a) - 1.0) / std::pow(p, a) * p / (p - 1.0);
}

double Fret0_closed(const ModelParams& m) {
    if (m.alpha >= 1.0) return 1.0;
    const double p = m.p, a = m.alpha;
    const double u = (std::pow(p, a) - 1.0) / (p - 1.0);
    return u * u * p / std::pow(p, a);
}

double fprime0_closed(const ModelParams& m) {
    const double p = m.p, a = m.alpha;
    const double A = std::pow(p, m.nu), pr = std::pow(p, m.r);
    const double pa1 = std::pow(p, a + 1.0) - 1.0;
    return pr * (std::pow(p, a) - 1.0) * std::pow(p / A, 2 * a + 1) *
           ((p - 1.0) / (pa1 * pa1) * std::pow(A / pr, a) - (std::pow(p, a) + 1.0) / (std::pow(p, 2 * a + 1) - 1.0));
}

double fret_prime0_closed(const ModelParams& m) {
    const double p = m.p, a = m.alpha;
    const double pa1 = std::pow(p, a + 1.0) - 1.0;
    const double u = std::pow(p, a) - 1.0;
    return (p - 1.0) * std::pow(p, 2 * a + 1) * u * u / ((std::pow(p, 2 * a + 1) - 1.0) * pa1 * pa1) *
           std::pow(p, -2.0 * a * m.r);
}

}  // namespace padic
