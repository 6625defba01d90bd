#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

#include "padic/core.hpp"

namespace padic {

struct SeriesTolerance {
    double rel_tol = 1e-15;
    int max_terms = 20000;
    void check() const;
};

// Truncated series result. tail_bound is a rigorous bound on the dropped terms
// (plus nothing else); converged=false means max_terms ran out first.
struct SeriesValue {
    double value = 0.0;
    double tail_bound = 0.0;
    bool converged = true;
    int terms = 0;
};

namespace detail {

inline double mag(double x) { return std::fabs(x); }
template <class R>
double mag(const std::complex<R>& z) {
    return static_cast<double>(std::abs(z));
}
template <class R>
double mag(const R& x) {
    return static_cast<double>(abs(x));
}

template <class T>
struct real_of {
    using type = T;
};
template <class R>
struct real_of<std::complex<R>> {
    using type = R;
};

}  // namespace detail

// (1-1/p) sum_{n>=n0} p^{-n}/(s + p^{-alpha n}) for real, complex or
// multiprecision s. Stops once the geometric tail bound 2 p^{-N}/|s| drops
// below eps*|sum|; for real s >= 0 and alpha < 1 the bound
// (1-1/p) p^{(alpha-1)N}/(1-p^{alpha-1}) is also used (it covers s = 0).
template <class C>
C lattice_sum(const C& s, const ModelParams& m, int n0, double eps, int max_terms, double* tail = nullptr,
              bool* ok = nullptr, int* terms = nullptr) {
    using R = typename detail::real_of<C>::type;
    using std::pow;
    const R p = R(m.p);
    const R q = R(1) - R(1) / p;
    const double sabs = detail::mag(s);
    bool real_nonneg = false;
    if constexpr (std::is_same_v<C, R>) real_nonneg = !(s < R(0));
    const double geo = m.alpha < 1.0 ? std::pow(double(m.p), m.alpha - 1.0) : 1.0;
    C sum = C(0);
    double tb = INFINITY;
    int i = 0;
    for (; i < max_terms; ++i) {
        const int n = n0 + i;
        const R pn = pow(p, R(-n));
        const R pan = pow(p, R(-m.alpha) * R(n));
        const C den = s + C(pan);
        if (detail::mag(den) < 1e-12 * static_cast<double>(pan))
            throw NumericalError("pole proximity", "s within 1e-12 relative of -p^{-alpha n}, n=" + std::to_string(n));
        sum += C(q * pn) / den;
        const double pn1 = static_cast<double>(pn) / m.p;  // p^{-(n+1)}
        const double pan1 = static_cast<double>(pan) * std::pow(double(m.p), -m.alpha);
        tb = INFINITY;
        if (sabs > 0 && pan1 <= sabs / 2) tb = 2.0 * pn1 / sabs;
        if (real_nonneg && m.alpha < 1.0) {
            const double g = (1.0 - 1.0 / m.p) * std::pow(double(m.p), (m.alpha - 1.0) * (n + 1)) / (1.0 - geo);
            tb = std::min(tb, g);
        }
        if (tb <= eps * detail::mag(sum) || (tb == 0.0)) {
            ++i;
            break;
        }
    }
    if (tail) *tail = tb;
    if (ok) *ok = tb <= eps * detail::mag(sum) || tb == 0.0;
    if (terms) *terms = i;
    return sum;
}

// I(s): the finite part (1-1/p) sum_{n=r}^{nu-1} p^{-n}/(s+p^{-alpha n}) + p^{-nu}/(s+p^{-alpha(nu-1)}),
// so that E = J - I.
template <class C>
C finite_part_I(const C& s, const ModelParams& m) {
    using R = typename detail::real_of<C>::type;
    using std::pow;
    const R p = R(m.p);
    const R q = R(1) - R(1) / p;
    C sum = C(0);
    for (int n = m.r; n <= m.nu - 1; ++n) sum += C(q * pow(p, R(-n))) / (s + C(pow(p, R(-m.alpha) * R(n))));
    sum += C(pow(p, R(-m.nu))) / (s + C(pow(p, R(-m.alpha) * R(m.nu - 1))));
    return sum;
}

template <class C>
C J_generic(const C& s, const ModelParams& m, double eps) {
    return lattice_sum(s, m, m.r, eps, 100000);
}

template <class C>
C E_generic(const C& s, const ModelParams& m, double eps) {
    using R = typename detail::real_of<C>::type;
    using std::pow;
    const R p = R(m.p);
    return lattice_sum(s, m, m.nu, eps, 100000) -
           C(pow(p, R(-m.nu))) / (s + C(pow(p, R(-m.alpha) * R(m.nu - 1))));
}

// F = E/J evaluated as 1 - I/J (no cancellation between the two infinite sums).
template <class C>
C F_generic(const C& s, const ModelParams& m, double eps) {
    return C(1) - finite_part_I(s, m) / J_generic(s, m, eps);
}

template <class C>
C Fret_generic(const C& s, const ModelParams& m, double eps) {
    using R = typename detail::real_of<C>::type;
    using std::exp;
    using std::log;
    using std::pow;
    const R p = R(m.p);
    const R lp = log(p);
    const R B = exp(-R(m.alpha) * R(m.r) * lp) * (R(1) - R(1) / p) / (R(1) - exp(-(R(m.alpha) + R(1)) * lp));
    return C(1) - C(1) / (C(pow(p, R(m.r))) * (C(B) + s) * J_generic(s, m, eps));
}

// ---- real-axis evaluators with tail bounds ----

SeriesValue eval_J(double s, const ModelParams& m, const SeriesTolerance& tol = {});
// J'(s) = -(1-1/p) sum p^{-n}/(s+p^{-alpha n})^2
SeriesValue eval_Jprime(double s, const ModelParams& m, const SeriesTolerance& tol = {});
SeriesValue eval_E(double s, const ModelParams& m, const SeriesTolerance& tol = {});
// F(s) = E/J; also computes 1 - I/J and throws if the two routes disagree.
SeriesValue eval_F_passage(double s, const ModelParams& m, const SeriesTolerance& tol = {});
SeriesValue eval_F_passage_alt(double s, const ModelParams& m, const SeriesTolerance& tol = {});
SeriesValue eval_F_return(double s, const ModelParams& m, const SeriesTolerance& tol = {});
SeriesValue eval_G(double s, const ModelParams& m, const SeriesTolerance& tol = {});
SeriesValue eval_G_R(double s, const ModelParams& m, const SeriesTolerance& tol = {});

enum class Flux { g, g_R };
enum class Survival { S, S_r, S_Zp };

SeriesValue flux_series(double t, Flux which, const ModelParams& m, const SeriesTolerance& tol = {});
SeriesValue survival_series(double t, Survival which, const ModelParams& m, const SeriesTolerance& tol = {});
SeriesValue epsilon_fund(double t, const ModelParams& m, const SeriesTolerance& tol = {});
// closed-form term-wise integral of epsilon over [0,t]
SeriesValue epsilon_integral(double t, const ModelParams& m, const SeriesTolerance& tol = {});

// ---- closed forms ----

// f(0+) = -(1/Gamma_p(-alpha)) p^r/|a|^{alpha+1}
double f0_closed(const ModelParams& m);
// total passage probability F(0): 1 for alpha >= 1
double F0_closed(const ModelParams& m);
// total return probability F_ret(0): 1 for alpha >= 1
double Fret0_closed(const ModelParams& m);
// f'(0+) as printed for the passage density
double fprime0_closed(const ModelParams& m);
// f_ret'(0+); the printed r=0 value times p^{-2 alpha r}
double fret_prime0_closed(const ModelParams& m);

}  // namespace padic
