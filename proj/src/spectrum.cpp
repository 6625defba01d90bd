#include "padic/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "padic/laplace.hpp"

namespace padic {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Ladder geometry for index k, written in the r-free variables
// c = p^{-alpha} + delta and d(j) = p^{-alpha j} - c, n = r + k + j.
struct Ladder {
    double p, alpha, pa;  // pa = p^{-alpha}
    int k;

    // T(j) = p^{-j}/d(j), U(j) = p^{-j}/d(j)^2, with the j<0 forms scaled to avoid overflow
    double d(int j, double delta) const {
        if (j == 0) return (1.0 - pa) - delta;
        if (j == 1) return -delta;
        return std::pow(p, -alpha * j) - pa - delta;
    }
    double T(int j, double delta) const {
        if (j < 0) {
            const int i = -j;
            return std::pow(p, -(alpha - 1.0) * i) / (1.0 - (pa + delta) * std::pow(p, -alpha * i));
        }
        return std::pow(p, -j) / d(j, delta);
    }
    double U(int j, double delta) const {
        if (j < 0) {
            const int i = -j;
            const double den = 1.0 - (pa + delta) * std::pow(p, -alpha * i);
            return std::pow(p, (1.0 - 2.0 * alpha) * i) / (den * den);
        }
        const double dd = d(j, delta);
        return std::pow(p, -j) / (dd * dd);
    }
    // d(j) for j<0 in units where T = p^{-j}/d: returns p^{-j}/d(j)^3 * 2 (derivative of U)
    double dU(int j, double delta) const {
        if (j < 0) {
            const int i = -j;
            const double den = 1.0 - (pa + delta) * std::pow(p, -alpha * i);
            return 2.0 * std::pow(p, (1.0 - 3.0 * alpha) * i) / (den * den * den);
        }
        const double dd = d(j, delta);
        return 2.0 * std::pow(p, -j) / (dd * dd * dd);
    }
};

struct Phi {
    double value = 0.0;
    double abs = 0.0;
    double deriv = 0.0;
};

// phi(delta) = sum_{j>=-k} T(j): J_r(-lambda) up to a positive factor.
Phi eval_phi(const Ladder& L, double delta) {
    Phi f;
    for (int j = -L.k; j <= 1; ++j) {
        const double t = L.T(j, delta);
        f.value += t;
        f.abs += std::fabs(t);
        f.deriv += L.U(j, delta);
    }
    for (int j = 2;; ++j) {
        const double t = L.T(j, delta);
        f.value += t;
        f.abs += std::fabs(t);
        f.deriv += L.U(j, delta);
        if (std::fabs(t) < 1e-18 * f.abs || j > 4000) break;
    }
    return f;
}

Ladder ladder_for(int k, const ModelParams& m) {
    return Ladder{double(m.p), m.alpha, std::pow(double(m.p), -m.alpha), k};
}

// the spectral scale p^{-alpha(r+k)} must stay representable
void check_range(int k, const ModelParams& m) {
    const double lg = -m.alpha * (m.r + k + 1) * std::log10(double(m.p));
    if (lg < -290.0 || lg > 290.0)
        throw NumericalError("underflow", "p^{-alpha(r+k+1)} out of range for k=" + std::to_string(k));
}

struct RootInfo {
    SpectralLine line;
    double delta_err = 0.0;
};

RootInfo solve_root(int k, const ModelParams& m) {
    if (k < 0) throw ValidationError({"ladder index k must be >= 0"});
    check_range(k, m);
    const Ladder L = ladder_for(k, m);
    const DeltaBracket br = delta_bracket(k, m);
    const double pole = 1.0 - L.pa;
    double lo = br.lower;
    double hi = std::min(br.upper, pole);
    const bool hi_is_pole = br.upper >= pole;
    if (!(lo > 0.0) || !(lo < hi)) throw NumericalError("bracket failure", "empty delta bracket at k=" + std::to_string(k));
    if (eval_phi(L, lo).value >= 0.0)
        throw NumericalError("bracket failure", "secular function nonnegative at the lower delta bound, k=" + std::to_string(k));
    if (!hi_is_pole && eval_phi(L, hi).value <= 0.0)
        throw NumericalError("bracket failure", "secular function nonpositive at the upper delta bound, k=" + std::to_string(k));
    int it = 0;
    for (; it < 200; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (eval_phi(L, mid).value < 0.0) lo = mid;
        else hi = mid;
    }
    // pick the endpoint with the smaller |phi|
    const Phi flo = eval_phi(L, lo);
    const Phi fhi = hi_is_pole && hi == pole ? Phi{INFINITY, INFINITY, INFINITY} : eval_phi(L, hi);
    const double delta = std::fabs(flo.value) <= std::fabs(fhi.value) ? lo : hi;
    const Phi f = delta == lo ? flo : fhi;
    if (it >= 200 && hi - lo > 4 * kEps * delta)
        throw NumericalError("non-convergence", "bisection did not collapse at k=" + std::to_string(k));
    RootInfo out;
    const double c = L.pa + delta;
    out.line.k = k;
    out.line.delta = delta;
    out.line.lambda = std::pow(L.p, -m.alpha * (m.r + k)) * c;
    out.line.residual = std::fabs(f.value / f.deriv) / c;
    out.delta_err = std::max(std::fabs(f.value / f.deriv), 4.0 * kEps * f.abs / f.deriv) + (hi - lo);
    return out;
}

}  // namespace

DeltaBracket delta_bracket(int k, const ModelParams& m) {
    const double p = m.p, a = m.alpha, lp = std::log(p);
    DeltaBracket b;
    if (a == 1.0) b.a_k = k + 1.0;
    else b.a_k = std::expm1(-(a - 1.0) * (k + 1) * lp) / std::expm1(-(a - 1.0) * lp);
    b.lower = -std::expm1(-a * lp) / (1.0 + p * b.a_k);
    b.upper = 1.0 / ((p - 1.0) * b.a_k);
    return b;
}

SpectralLine solve_lambda(int k, const ModelParams& m) { return solve_root(k, m).line; }

namespace {

ResidueDetail residue_from_root(const RootInfo& root, const ModelParams& m, double* dtilde_out = nullptr) {
    const SpectralLine& line = root.line;
    const int k = line.k;
    const Ladder L = ladder_for(k, m);
    const double delta = line.delta;
    const double q = 1.0 - 1.0 / L.p;
    const int J1 = m.nu - 1 - m.r - k;

    // denominator D~ = (1-1/p) sum_{j>=-k} U(j), and its delta-derivative
    double D = 0.0, dD = 0.0;
    for (int j = -k;; ++j) {
        const double u = L.U(j, delta);
        D += u;
        dD += L.dU(j, delta);
        if (j > 1 && u < 1e-18 * D) break;
        if (j > 4000) break;
    }
    D *= q;
    dD *= q;

    // numerator through I: (1-1/p) sum_{j=-k}^{J1} T(j) + T(J1)/p
    double NI = 0.0, NI_abs = 0.0, dNI = 0.0;
    for (int j = -k; j <= J1; ++j) {
        const double t = q * L.T(j, delta);
        NI += t;
        NI_abs += std::fabs(t);
        dNI += q * L.U(j, delta);
    }
    {
        const double t = L.T(J1, delta) / L.p;
        NI += t;
        NI_abs += std::fabs(t);
        dNI += L.U(J1, delta) / L.p;
    }
    // numerator through -E: -(1-1/p) sum_{j>J1} T(j) + T(J1)/p
    double NE = L.T(J1, delta) / L.p, NE_abs = std::fabs(NE);
    for (int j = J1 + 1;; ++j) {
        const double t = -q * L.T(j, delta);
        NE += t;
        NE_abs += std::fabs(t);
        if (j > 1 && std::fabs(t) < 1e-18 * NE_abs) break;
        if (j > J1 + 4000) break;
    }

    ResidueDetail r;
    const double scale = std::pow(L.p, -m.alpha * (m.r + k));
    r.shifted_I = scale * NI / D;
    r.shifted_E = scale * NE / D;
    r.cond_I = NI_abs / std::fabs(NI);
    r.cond_E = NE_abs / std::fabs(NE);
    const bool use_E = r.cond_E < r.cond_I;
    r.value = use_E ? r.shifted_E : r.shifted_I;
    const double cond = std::min(r.cond_I, r.cond_E);
    // rounding in the sums plus the propagated root error
    const double sens = std::fabs(dNI / NI) + std::fabs(dD / D);
    const double rel = 16.0 * kEps * (cond + 2.0) + sens * root.delta_err;
    r.err = rel * std::fabs(r.value);
    if (dtilde_out) *dtilde_out = D;

    // compact form in lambda directly: I(-lambda)/|J'(-lambda)|. Its J' terms reach
    // p^{(2 alpha - 1)(r+k)}/delta^2, so it is skipped (left NaN) once that leaves binary64 range.
    const double lam = line.lambda;
    double Ic = 0.0, Ic_abs = 0.0, Jp = 0.0, amp = 1.0;
    for (int n = m.r; n <= m.nu - 1; ++n) {
        const double pl = std::pow(L.p, -m.alpha * n), dn = pl - lam;
        const double t = q * std::pow(L.p, -n) / dn;
        Ic += t;
        Ic_abs += std::fabs(t);
        amp = std::max(amp, pl / std::fabs(dn));
    }
    {
        const double pl = std::pow(L.p, -m.alpha * (m.nu - 1)), dn = pl - lam;
        const double t = std::pow(L.p, -m.nu) / dn;
        Ic += t;
        Ic_abs += std::fabs(t);
        amp = std::max(amp, pl / std::fabs(dn));
    }
    for (int n = m.r;; ++n) {
        const double pl = std::pow(L.p, -m.alpha * n), dn = pl - lam;
        const double t = q * std::pow(L.p, -n) / dn / dn;  // dn^2 alone can be subnormal
        Jp += t;
        amp = std::max(amp, pl / std::fabs(dn));
        if (pl < lam && t < 1e-18 * Jp) break;
        if (n > m.r + 4000) break;
    }
    if (!(Jp < 1e300)) {
        r.compact = r.compact_err = std::nan("");
        return r;
    }
    r.compact = Ic / Jp;
    const double cond_c = Ic_abs / std::fabs(Ic);
    r.compact_err = (16.0 * kEps * (cond_c + 2.0) * amp + sens * root.delta_err) * std::fabs(r.compact);
    if (std::fabs(r.compact - r.value) > 4.0 * (r.err + r.compact_err) + 1e-300)
        throw NumericalError("route disagreement",
                             "compact and shifted residue forms differ at k=" + std::to_string(k) + " (" + to_string(m) + ")");
    return r;
}

}  // namespace

ResidueDetail residue_detail(const SpectralLine& line, const ModelParams& m) {
    // re-derive the root error from the secular function at the given delta
    const Ladder L = ladder_for(line.k, m);
    const Phi f = eval_phi(L, line.delta);
    RootInfo root{line, std::max(std::fabs(f.value / f.deriv), 4.0 * kEps * f.abs / f.deriv) + kEps * line.delta};
    return residue_from_root(root, m);
}

double residue_b(const SpectralLine& line, const ModelParams& m) { return residue_detail(line, m).value; }

int max_spectrum_k(const ModelParams& m) {
    return int(std::floor(290.0 / (m.alpha * std::log10(double(m.p))))) - m.r - 2;
}

namespace {

// Neumaier summation
struct Acc {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double t = s + x;
        if (std::fabs(s) >= std::fabs(x)) c += (s - t) + x;
        else c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

void extend(Spectrum& sp, int K) {
    for (int k = int(sp.lines.size()); k <= K; ++k) {
        RootInfo root = solve_root(k, sp.params);
        const ResidueDetail rd = residue_from_root(root, sp.params);
        root.line.residue = rd.value;
        root.line.residue_err = rd.err;
        sp.lines.push_back(root.line);
    }
    sp.K = K;
    Acc acc;
    double err = 0.0, abs_sum = 0.0;
    for (const auto& l : sp.lines) {
        acc.add(l.residue);
        err += l.residue_err;
        abs_sum += std::fabs(l.residue);
    }
    sp.sum_b = acc.value();
    sp.rounding = err + 4.0 * kEps * (abs_sum + sp.f0);
    sp.tail_bound = std::max(sp.f0 - sp.sum_b, 0.0) + sp.rounding;
}

}  // namespace

Spectrum build_spectrum(const ModelParams& m, int K, double target_tail) {
    if (K < m.nu - m.r) throw ValidationError({"K must be >= nu - r so the signed residue prefix is resolved"});
    const int kmax = max_spectrum_k(m);
    if (K > kmax) throw ValidationError({"K too large for binary64 range (max " + std::to_string(kmax) + ")"});
    Spectrum sp;
    sp.params = m;
    sp.f0 = f0_closed(m);
    extend(sp, K);
    if (target_tail > 0.0) {
        while (sp.tail_bound > target_tail) {
            if (sp.K >= std::min(400, kmax))
                throw NumericalError("tolerance not met", "spectrum tail bound above target at K=" + std::to_string(sp.K));
            extend(sp, std::min(sp.K + 20, std::min(400, kmax)));
        }
    }
    return sp;
}

double f_series(double t, const Spectrum& sp) {
    Acc acc;
    for (const auto& l : sp.lines) acc.add(l.residue * std::exp(-l.lambda * t));
    return acc.value();
}

double f_cdf_series(double t, const Spectrum& sp) {
    Acc acc;
    for (const auto& l : sp.lines) acc.add(l.residue * -std::expm1(-l.lambda * t) / l.lambda);
    return acc.value();
}

double f_prime0_series(const Spectrum& sp) {
    Acc acc;
    for (const auto& l : sp.lines) acc.add(-l.lambda * l.residue);
    return acc.value();
}

double sum_b_over_lambda(const Spectrum& sp) {
    Acc acc;
    for (const auto& l : sp.lines) acc.add(l.residue / l.lambda);
    return acc.value();
}

double f_laplace_partial(double s, const Spectrum& sp) {
    Acc acc;
    for (const auto& l : sp.lines) acc.add(l.residue / (s + l.lambda));
    return acc.value();
}

ReturnSpectrum build_return_spectrum(const ModelParams& m, int K) {
    if (K < 0) throw ValidationError({"K must be >= 0"});
    const int kmax = max_spectrum_k(m);
    if (K > kmax) throw ValidationError({"K too large for binary64 range"});
    ReturnSpectrum rs;
    rs.params = m;
    rs.B = b_alpha_r(m);
    const double pr = std::pow(double(m.p), m.r);
    Acc acc;
    double abs_sum = 0.0;
    for (int k = 0; k <= K; ++k) {
        const RootInfo root = solve_root(k, m);
        double D = 0.0;
        residue_from_root(root, m, &D);
        const double lam = root.line.lambda;
        if (std::fabs(rs.B - lam) < 1e-10 * rs.B)
            throw NumericalError("pole classification ambiguous", "B_alpha(r) coincides with lambda_" + std::to_string(k));
        // |J'(-lambda)| = p^{(2 alpha - 1)L} D~, L = r + k
        const int Lx = m.r + k;
        const double c = std::pow(double(m.p), (1.0 - 2.0 * m.alpha) * Lx) / (pr * (rs.B - lam) * D);
        rs.lambda.push_back(lam);
        rs.coef.push_back(c);
        acc.add(c);
        abs_sum += std::fabs(c);
    }
    // extra pole at s = -B unless B sits on the lattice p^{-alpha n}
    const double nB = -std::log(rs.B) / (m.alpha * std::log(double(m.p)));
    const double lat = std::pow(double(m.p), -m.alpha * std::round(nB));
    if (std::fabs(rs.B - lat) < 1e-10 * rs.B)
        throw NumericalError("pole classification ambiguous", "B_alpha(r) lies on the lattice p^{-alpha n}");
    const SeriesValue J = eval_J(-rs.B, m);
    rs.coef_B = -1.0 / (pr * J.value);
    rs.has_B_pole = true;
    acc.add(rs.coef_B);
    abs_sum += std::fabs(rs.coef_B);
    // all coefficients sum to f_ret(0+) = 0
    rs.tail_bound = std::fabs(acc.value()) + 64.0 * kEps * abs_sum;
    return rs;
}

double f_ret_partial(double t, const ReturnSpectrum& rs) {
    Acc acc;
    for (size_t i = 0; i < rs.lambda.size(); ++i) acc.add(rs.coef[i] * std::exp(-rs.lambda[i] * t));
    if (rs.has_B_pole) acc.add(rs.coef_B * std::exp(-rs.B * t));
    return acc.value();
}

double f_ret_talbot(double t, const ModelParams& m, int M) {
    return talbot([&](std::complex<double> s) { return Fret_generic(s, m, 1e-16); }, t, M);
}

ShadowedValue f_ret_series(double t, const ReturnSpectrum& rs, double rel_tol) {
    if (!(t > 0)) throw ValidationError({"f_ret_series needs t > 0"});
    ShadowedValue v;
    v.series = f_ret_partial(t, rs);
    v.shadow = f_ret_talbot(t, rs.params);
    const double floor = 1e-12 * rs.B;
    v.flagged = std::fabs(v.series - v.shadow) > rel_tol * std::fabs(v.shadow) + rs.tail_bound + floor;
    v.value = v.flagged ? v.shadow : v.series;
    return v;
}

std::vector<double> f_ret_grid(const std::vector<double>& t, const ReturnSpectrum& rs, int stride, int* flagged) {
    std::vector<double> out(t.size());
    int nflag = 0;
    stride = std::max(stride, 1);
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] <= 0.0) {
            out[i] = 0.0;
            continue;
        }
        if (i % stride == 0 || i + 1 == t.size()) {
            const ShadowedValue v = f_ret_series(t[i], rs);
            out[i] = v.value;
            nflag += v.flagged;
        } else {
            out[i] = f_ret_partial(t[i], rs);
        }
    }
    if (flagged) *flagged = nflag;
    return out;
}

DeltaLimit delta_limit(const ModelParams& m, int k_max) {
    if (k_max < 10) throw ValidationError({"k_max must be >= 10"});
    k_max = std::min(k_max, max_spectrum_k(m));
    DeltaLimit out;
    const double p = m.p;
    for (int k = 0; k <= k_max; ++k) {
        const double d = solve_lambda(k, m).delta;
        double x = d;
        if (m.alpha == 1.0) x = k * d;
        else if (m.alpha < 1.0) x = std::pow(p, (1.0 - m.alpha) * k) * d;
        out.sequence.push_back(x);
    }
    const auto& s = out.sequence;
    const size_t n = s.size();
    std::vector<double> diffs;
    for (size_t i = n - 5; i < n; ++i) diffs.push_back(std::fabs(s[i] - s[i - 1]));
    out.cauchy = *std::max_element(diffs.begin(), diffs.end());
    const double noise = 1e3 * kEps * std::fabs(s.back());
    for (size_t i = 1; i < diffs.size(); ++i)
        if (diffs[i] > diffs[i - 1] * (1.0 + 1e-6) + noise) out.converged = false;
    if (m.alpha == 1.0) {
        // x_k ~ L + A/k + B/k^2 through three late points
        const double k3 = n - 1, k2 = k3 - 10, k1 = k3 - 20;
        const double x1 = s[size_t(k1)], x2 = s[size_t(k2)], x3 = s[size_t(k3)];
        // solve for L with u = 1/k
        const double u1 = 1 / k1, u2 = 1 / k2, u3 = 1 / k3;
        const double l1 = x1 * u2 * u3 / ((u1 - u2) * (u1 - u3));
        const double l2 = x2 * u1 * u3 / ((u2 - u1) * (u2 - u3));
        const double l3 = x3 * u1 * u2 / ((u3 - u1) * (u3 - u2));
        out.limit = l1 + l2 + l3;
    } else {
        const double x0 = s[n - 3], x1 = s[n - 2], x2 = s[n - 1];
        const double den = (x2 - x1) - (x1 - x0);
        out.limit = std::fabs(den) > 64.0 * kEps * std::fabs(x2) ? x2 - (x2 - x1) * (x2 - x1) / den : x2;
        if (!std::isfinite(out.limit)) out.limit = x2;
    }
    if (!out.converged)
        throw NumericalError("non-convergence", "delta_k sequence differences are not decreasing (" + to_string(m) + ")");
    return out;
}

}  // namespace padic
