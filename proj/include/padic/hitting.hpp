#pragma once

#include <functional>
#include <vector>

#include "padic/core.hpp"

namespace padic {

struct TimeGrid {
    double T = 1.0;
    int n = 2;
    double h = 0.5;
    double t(int i) const { return i * h; }
    std::vector<double> points() const;
};

TimeGrid make_grid(double T, int n);
std::vector<double> sample(const TimeGrid& g, const std::function<double(double)>& fn);

// Second-kind equation g(t) = int_0^t gR(t-tau) f(tau) dtau + f(t), trapezoidal marching.
std::vector<double> volterra2_solve(const std::vector<double>& g, const std::vector<double>& gR, const TimeGrid& grid);

// c_i = trapezoid rule for int_0^{t_i} a(t_i - tau) b(tau) dtau
std::vector<double> trap_convolve_direct(const std::vector<double>& a, const std::vector<double>& b, double h);
std::vector<double> trap_convolve_fft(const std::vector<double>& a, const std::vector<double>& b, double h);
// running trapezoid integral of f
std::vector<double> trap_cumulative(const std::vector<double>& f, double h);

// sup_i |S_r(t_i) - int_0^{t_i} S(t_i - tau) f(tau) dtau|
double volterra1_residual(const std::vector<double>& f, const TimeGrid& grid, const ModelParams& m);
// sup_i |S(t_i) - e^{-B t_i} - int_0^{t_i} S(t_i - tau) f_ret(tau) dtau|
double volterra_ret_residual(const std::vector<double>& f_ret, const TimeGrid& grid, const ModelParams& m);

struct HittingTable {
    TimeGrid grid;
    int m_max = 0;
    std::vector<std::vector<double>> q;  // q[m][i], m = 0..m_max+1
    std::vector<std::vector<double>> h;  // h[m][i], m = 0..m_max
    std::vector<double> mu;              // sum_{m=1}^{m_max} m h^(m)
};

std::vector<double> q_m(const TimeGrid& grid, int m, const std::vector<double>& f, const std::vector<double>& f_ret);

// q up to the first m with q^(m)(T) <= q_cut (capped at m_cap).
HittingTable build_hitting_table(const TimeGrid& grid, const std::vector<double>& f, const std::vector<double>& f_ret,
                                 double q_cut = 1e-4, int m_cap = 400);

// estimate of sum_{m > m_max} q^(m)(t_i) by geometric extrapolation of the last two rows
double hitting_tail_estimate(const HittingTable& tab, int i);

// mu(t) = p^r (B int_0^t eps + eps(t))
double mu_exact(double t, const ModelParams& m);
std::vector<double> mu_exact(const TimeGrid& grid, const ModelParams& m);

}  // namespace padic
