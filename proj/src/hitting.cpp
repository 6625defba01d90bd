#include "padic/hitting.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "padic/transforms.hpp"

namespace padic {

namespace {
std::mutex fftw_plan_mutex;  // planner calls are not thread-safe
}

std::vector<double> TimeGrid::points() const {
    std::vector<double> out(n + 1);
    for (int i = 0; i <= n; ++i) out[i] = t(i);
    return out;
}

TimeGrid make_grid(double T, int n) {
    if (!(T > 0)) throw ValidationError({"grid horizon T must be > 0"});
    if (n < 2) throw ValidationError({"grid needs n >= 2 steps"});
    return TimeGrid{T, n, T / n};
}

std::vector<double> sample(const TimeGrid& g, const std::function<double(double)>& fn) {
    std::vector<double> out(g.n + 1);
    for (int i = 0; i <= g.n; ++i) out[i] = fn(g.t(i));
    return out;
}

std::vector<double> volterra2_solve(const std::vector<double>& g, const std::vector<double>& gR, const TimeGrid& grid) {
    const int n = grid.n;
    if (int(g.size()) != n + 1 || int(gR.size()) != n + 1) throw ValidationError({"sample arrays must have n+1 entries"});
    if (!std::isfinite(gR[0])) throw ValidationError({"g_R(0) must be finite"});
    const double h = grid.h;
    double gmax = 0.0;
    for (double x : g) gmax = std::max(gmax, std::fabs(x));
    std::vector<double> f(n + 1);
    f[0] = g[0];
    const double diag = 1.0 + 0.5 * h * gR[0];
    for (int i = 1; i <= n; ++i) {
        double acc = 0.5 * gR[i] * f[0];
        for (int j = 1; j < i; ++j) acc += gR[i - j] * f[j];
        f[i] = (g[i] - h * acc) / diag;
        if (std::fabs(f[i]) > 1e3 * std::max(gmax, 1e-300))
            throw NumericalError("divergence", "Volterra solution exceeds 1e3 * max|g| at step " + std::to_string(i));
    }
    return f;
}

std::vector<double> trap_convolve_direct(const std::vector<double>& a, const std::vector<double>& b, double h) {
    const size_t n = std::min(a.size(), b.size());
    std::vector<double> c(n, 0.0);
    for (size_t i = 1; i < n; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j <= i; ++j) acc += a[i - j] * b[j];
        c[i] = h * (acc - 0.5 * (a[i] * b[0] + a[0] * b[i]));
    }
    return c;
}

std::vector<double> trap_convolve_fft(const std::vector<double>& a, const std::vector<double>& b, double h) {
    const size_t n = std::min(a.size(), b.size());
    if (n < 64) return trap_convolve_direct(a, b, h);
    size_t N = 1;
    while (N < 2 * n) N <<= 1;
    const size_t nc = N / 2 + 1;
    double* xa = fftw_alloc_real(N);
    double* xb = fftw_alloc_real(N);
    fftw_complex* ya = fftw_alloc_complex(nc);
    fftw_complex* yb = fftw_alloc_complex(nc);
    fftw_plan pa, pb, pc;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        pa = fftw_plan_dft_r2c_1d(int(N), xa, ya, FFTW_ESTIMATE);
        pb = fftw_plan_dft_r2c_1d(int(N), xb, yb, FFTW_ESTIMATE);
        pc = fftw_plan_dft_c2r_1d(int(N), ya, xa, FFTW_ESTIMATE);
    }
    std::fill(xa, xa + N, 0.0);
    std::fill(xb, xb + N, 0.0);
    std::copy(a.begin(), a.begin() + n, xa);
    std::copy(b.begin(), b.begin() + n, xb);
    fftw_execute(pa);
    fftw_execute(pb);
    for (size_t k = 0; k < nc; ++k) {
        const double re = ya[k][0] * yb[k][0] - ya[k][1] * yb[k][1];
        const double im = ya[k][0] * yb[k][1] + ya[k][1] * yb[k][0];
        ya[k][0] = re;
        ya[k][1] = im;
    }
    fftw_execute(pc);
    std::vector<double> c(n, 0.0);
    for (size_t i = 1; i < n; ++i) c[i] = h * (xa[i] / double(N) - 0.5 * (a[i] * b[0] + a[0] * b[i]));
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(pa);
        fftw_destroy_plan(pb);
        fftw_destroy_plan(pc);
    }
    fftw_free(xa);
    fftw_free(xb);
    fftw_free(ya);
    fftw_free(yb);
    return c;
}

std::vector<double> trap_cumulative(const std::vector<double>& f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
}

double volterra1_residual(const std::vector<double>& f, const TimeGrid& grid, const ModelParams& m) {
    const auto S = sample(grid, [&](double t) { return survival_series(t, Survival::S, m).value; });
    const auto Sr = sample(grid, [&](double t) { return survival_series(t, Survival::S_r, m).value; });
    const auto c = trap_convolve_fft(S, f, grid.h);
    double sup = 0.0;
    for (int i = 0; i <= grid.n; ++i) sup = std::max(sup, std::fabs(Sr[i] - c[i]));
    return sup;
}

double volterra_ret_residual(const std::vector<double>& f_ret, const TimeGrid& grid, const ModelParams& m) {
    const double B = b_alpha_r(m);
    const auto S = sample(grid, [&](double t) { return survival_series(t, Survival::S, m).value; });
    const auto c = trap_convolve_fft(S, f_ret, grid.h);
    double sup = 0.0;
    for (int i = 0; i <= grid.n; ++i) sup = std::max(sup, std::fabs(S[i] - std::exp(-B * grid.t(i)) - c[i]));
    return sup;
}

std::vector<double> q_m(const TimeGrid& grid, int m, const std::vector<double>& f, const std::vector<double>& f_ret) {
    if (m < 0) throw ValidationError({"m must be >= 0"});
    if (m == 0) return std::vector<double>(grid.n + 1, 1.0);
    std::vector<double> q = trap_cumulative(f, grid.h);
    for (int k = 2; k <= m; ++k) q = trap_convolve_fft(q, f_ret, grid.h);
    return q;
}

HittingTable build_hitting_table(const TimeGrid& grid, const std::vector<double>& f, const std::vector<double>& f_ret,
                                 double q_cut, int m_cap) {
    HittingTable tab;
    tab.grid = grid;
    tab.q.push_back(std::vector<double>(grid.n + 1, 1.0));
    tab.q.push_back(trap_cumulative(f, grid.h));
    int m = 1;
    while (tab.q[m].back() > q_cut && m < m_cap) {
        tab.q.push_back(trap_convolve_fft(tab.q[m], f_ret, grid.h));
        ++m;
    }
    tab.m_max = m;
    // one more row so that h^(m_max) = q^(m_max) - q^(m_max+1) is defined
    tab.q.push_back(trap_convolve_fft(tab.q[m], f_ret, grid.h));
    tab.h.assign(m + 1, std::vector<double>(grid.n + 1));
    for (int k = 0; k <= m; ++k)
        for (int i = 0; i <= grid.n; ++i) tab.h[k][i] = tab.q[k][i] - tab.q[k + 1][i];
    tab.mu.assign(grid.n + 1, 0.0);
    for (int k = 1; k <= m; ++k)
        for (int i = 0; i <= grid.n; ++i) tab.mu[i] += k * tab.h[k][i];
    return tab;
}

double hitting_tail_estimate(const HittingTable& tab, int i) {
    // sum_{n>M} n h^(n) = M q^(M+1) + sum_{n>M} q^(n)
    const int M = tab.m_max;
    const double qa = tab.q[M][i], qb = tab.q[M + 1][i];
    const double rho = qa > 0 ? std::min(qb / qa, 0.999) : 0.0;
    return M * qb + qb / (1.0 - rho);
}

double mu_exact(double t, const ModelParams& m) {
    if (t < 0) throw ValidationError({"t must be >= 0"});
    if (t == 0.0) return 0.0;
    // inflow into the ball is dS_r/dt + B S_r with S_r = p^r eps, so both terms carry p^r
    const double pr = std::pow(double(m.p), m.r);
    return pr * (b_alpha_r(m) * epsilon_integral(t, m).value + epsilon_fund(t, m).value);
}

std::vector<double> mu_exact(const TimeGrid& grid, const ModelParams& m) {
    return sample(grid, [&](double t) { return mu_exact(t, m); });
}

}  // namespace padic
