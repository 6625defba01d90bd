#include "padic/kernels.hpp"

#include <cmath>
#include <limits>

namespace padic {

namespace {

struct Tail {
    double value = 0.0;
    double bound = 0.0;
};

// u_m = p^m W(p^m)
double u_of(const KernelSpec& k, int p, int mm) {
    const double x = std::pow(double(p), mm);
    switch (k.kind) {
        case KernelSpec::Kind::VladimirovPower:
            return kernel_const(p, k.alpha) * std::pow(double(p), -k.alpha * mm);
        case KernelSpec::Kind::Exponential:
            return std::exp(-k.alpha * x);
        case KernelSpec::Kind::Logarithmic:
            return std::pow(std::log1p(x), -k.alpha);
        default:
            throw std::logic_error("u_of on custom kernel");
    }
}

// sum_{m>=j} u_m with a tail bound.
Tail sum_u_from(const KernelSpec& k, int p, int j, const SeriesTolerance& tol) {
    const double lp = std::log(double(p));
    if (k.kind == KernelSpec::Kind::Logarithmic && k.alpha <= 1.0)
        throw NumericalError("kernel divergence",
                             "logarithmic kernel with alpha <= 1 has sum_m ln(1+p^m)^{-alpha} = infinity");
    double sum = 0.0;
    int i = 0;
    for (; i < tol.max_terms; ++i) {
        const int mm = j + i;
        const double u = u_of(k, p, mm);
        sum += u;
        if (sum > 1e12) throw NumericalError("kernel divergence", "partial sums of the symbol exceed 1e12");
        double tb = INFINITY, est = 0.0;
        switch (k.kind) {
            case KernelSpec::Kind::VladimirovPower: {
                const double rho = std::pow(double(p), -k.alpha);
                tb = u * rho / (1.0 - rho);
                break;
            }
            case KernelSpec::Kind::Exponential: {
                const double u1 = u_of(k, p, mm + 1);
                if (u == 0.0) {
                    tb = 0.0;
                } else {
                    // successive ratios shrink, so the first one dominates a geometric tail
                    const double rho = u1 / u;
                    tb = rho < 1.0 ? u1 / (1.0 - rho) : INFINITY;
                }
                break;
            }
            case KernelSpec::Kind::Logarithmic: {
                // u_m ~ f(m) = (m ln p)^{-alpha}; Euler-Maclaurin for sum_{m>M} f(m)
                if (mm < 60) break;
                const double a = k.alpha, M = mm;
                const double f = std::pow(M * lp, -a);
                const double integral = std::pow(M * lp, 1.0 - a) / ((a - 1.0) * lp);
                const double fp = -a * f / M;
                est = integral - f / 2.0 - fp / 12.0;
                const double f2 = a * (a + 1.0) * f / (M * M);
                // Euler-Maclaurin remainder (generous), plus ln(1+p^m) - m ln p <= p^{-m}
                tb = f2 / 120.0 + a * f / (M * lp) * std::pow(double(p), -M) / (1.0 - 1.0 / p);
                break;
            }
            default:
                break;
        }
        if (k.kind == KernelSpec::Kind::Logarithmic && tb <= tol.rel_tol * (sum + est))
            return {sum + est, tb};
        if (tb <= tol.rel_tol * sum || tb == 0.0) return {sum, tb};
    }
    throw NumericalError("tolerance not met", "kernel tail sum exhausted max_terms");
}

}  // namespace

std::string kernel_name(const KernelSpec& k) {
    switch (k.kind) {
        case KernelSpec::Kind::VladimirovPower: return "power";
        case KernelSpec::Kind::Exponential: return "exp";
        case KernelSpec::Kind::Logarithmic: return "log";
        case KernelSpec::Kind::CustomSymbol: return "custom";
    }
    return "?";
}

KernelSpec parse_kernel(const std::string& name, double alpha) {
    if (name == "power") return KernelSpec::power(alpha);
    if (name == "exp") return KernelSpec::exponential(alpha);
    if (name == "log") return KernelSpec::logarithmic(alpha);
    throw ValidationError({"unknown kernel '" + name + "' (expected power, exp or log)"});
}

void check_symbol_table(const KernelSpec& k) {
    if (k.kind != KernelSpec::Kind::CustomSymbol) return;
    std::vector<std::string> bad;
    if (k.table.empty()) bad.push_back("custom symbol table is empty");
    for (size_t i = 0; i < k.table.size(); ++i) {
        if (!(k.table[i] >= 0.0)) bad.push_back("symbol entry " + std::to_string(i) + " is negative");
        if (i && k.table[i] > k.table[i - 1])
            bad.push_back("symbol increases with n at entry " + std::to_string(i) + " (must be nondecreasing in |k|)");
    }
    if (!bad.empty()) throw ValidationError(bad);
}

SeriesValue kernel_symbol(const KernelSpec& k, int n, const ModelParams& m, const SeriesTolerance& tol) {
    tol.check();
    if (k.kind == KernelSpec::Kind::CustomSymbol) {
        const long i = long(n) - k.n0;
        if (i < 0 || i >= long(k.table.size()))
            throw ValidationError({"custom symbol table does not cover n=" + std::to_string(n)});
        return {k.table[i], 0.0, true, 1};
    }
    const int p = m.p;
    const double u1 = u_of(k, p, n + 1);
    const Tail t = sum_u_from(k, p, n + 2, tol);
    const double q = 1.0 - 1.0 / p;
    return {u1 + q * t.value, q * t.bound, true, 0};
}

SeriesValue kernel_exit_rate(const KernelSpec& k, const ModelParams& m, const SeriesTolerance& tol) {
    tol.check();
    const double q = 1.0 - 1.0 / m.p;
    if (k.kind == KernelSpec::Kind::CustomSymbol) {
        check_symbol_table(k);
        // u_{r+1} = sum_j p^{-j} (W~_{r+j} - W~_{r+j+1}), B = W~_r - u_{r+1}/p
        const long i0 = long(m.r) - k.n0;
        if (i0 < 0 || i0 >= long(k.table.size()))
            throw ValidationError({"custom symbol table does not cover n=r"});
        double u = 0.0, w = 1.0;
        for (size_t i = i0; i + 1 < k.table.size(); ++i, w /= m.p) u += w * (k.table[i] - k.table[i + 1]);
        const double last_w = w;
        u += last_w * k.table.back();  // entries beyond the table treated as 0
        return {k.table[i0] - u / m.p, last_w * k.table.back() / m.p, true, int(k.table.size())};
    }
    const Tail t = sum_u_from(k, m.p, m.r + 1, tol);
    return {q * t.value, q * t.bound, true, 0};
}

SeriesValue eval_J_general(double s, const KernelSpec& k, const ModelParams& m, const SeriesTolerance& tol) {
    tol.check();
    const double q = 1.0 - 1.0 / m.p;
    const double pr = std::pow(double(m.p), m.r);
    double sum = 0.0, tb = INFINITY, sym_err = 0.0;
    int i = 0;
    const bool custom = k.kind == KernelSpec::Kind::CustomSymbol;
    const int n_end = custom ? k.n0 + int(k.table.size()) : std::numeric_limits<int>::max();
    for (; i < tol.max_terms; ++i) {
        const int n = m.r + i;
        if (n >= n_end) break;
        const SeriesValue w = kernel_symbol(k, n, m, tol);
        const double den = s + w.value;
        if (std::fabs(den) < 1e-12 * std::max(w.value, 1e-300))
            throw NumericalError("pole proximity", "s near -W~(p^{-n}), n=" + std::to_string(n));
        const double pn = std::pow(double(m.p), -n);
        sum += q * pn / den;
        sym_err += q * pn * w.tail_bound / (den * den);
        const double w1 = custom ? 0.0 : w.value;  // symbols are nonincreasing in n
        if (s > 0) tb = (pn / m.p) / s;
        else if (s < 0 && w1 <= std::fabs(s) / 2) tb = 2.0 * (pn / m.p) / std::fabs(s);
        if (!custom && tb <= tol.rel_tol * std::fabs(sum)) {
            ++i;
            break;
        }
    }
    if (custom) tb = s > 0 ? std::pow(double(m.p), -(n_end - 1)) / m.p / s : INFINITY;
    SeriesValue out{pr * sum, pr * (tb + sym_err), std::isfinite(tb), i};
    if (!out.converged) throw NumericalError("tolerance not met", "generalized J_r");
    return out;
}

SeriesValue eval_F_return_general(double s, const KernelSpec& k, const ModelParams& m, const SeriesTolerance& tol) {
    const SeriesValue B = kernel_exit_rate(k, m, tol);
    const SeriesValue J = eval_J_general(s, k, m, tol);
    const double den = (B.value + s) * J.value;
    if (den == 0.0) throw NumericalError("denominator zero", "(B+s)J_r(s)=0 at s=" + std::to_string(s));
    SeriesValue out;
    out.value = 1.0 - 1.0 / den;
    out.tail_bound = (B.tail_bound * std::fabs(J.value) + std::fabs(B.value + s) * J.tail_bound) / (den * den);
    out.terms = J.terms;
    return out;
}

}  // namespace padic
