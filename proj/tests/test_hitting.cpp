#include <cmath>

#include "doctest.h"
#include "padic/hitting.hpp"
#include "padic/montecarlo.hpp"
#include "padic/spectrum.hpp"

using namespace padic;

TEST_SUITE("hitting") {

TEST_CASE("FFT and direct trapezoid convolutions agree") {
    const TimeGrid g = make_grid(3.0, 300);
    const auto a = sample(g, [](double t) { return std::exp(-t) * std::cos(3 * t); });
    const auto b = sample(g, [](double t) { return 1.0 / (1.0 + t * t); });
    const auto d = trap_convolve_direct(a, b, g.h);
    const auto f = trap_convolve_fft(a, b, g.h);
    for (size_t i = 0; i < d.size(); ++i) CHECK(f[i] == doctest::Approx(d[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("second-kind solver: known solution, second order") {
    // f + c int_0^t f = 1  =>  f = e^{-c t}
    const double c = 2.0;
    double prev = 0.0;
    for (int n : {200, 400}) {
        const TimeGrid g = make_grid(3.0, n);
        const auto one = sample(g, [](double) { return 1.0; });
        const auto k = sample(g, [&](double) { return c; });
        const auto f = volterra2_solve(one, k, g);
        double err = 0.0;
        for (int i = 0; i <= n; ++i) err = std::max(err, std::fabs(f[i] - std::exp(-c * g.t(i))));
        if (prev > 0) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.05));
        prev = err;
    }
}

TEST_CASE("hitting table invariants") {
    const ModelParams m{2, 1.5, 0, 2};
    const Spectrum sp = build_spectrum(m, 60);
    const ReturnSpectrum rs = build_return_spectrum(m, 60);
    const TimeGrid g = make_grid(50.0 / sp.lines[0].lambda, 4000);
    const auto f = sample(g, [&](double t) { return f_series(t, sp); });
    const auto fr = f_ret_grid(g.points(), rs, 64);
    const HittingTable tab = build_hitting_table(g, f, fr, 1e-6);
    for (int k = 0; k <= tab.m_max; ++k)
        for (int i = 0; i <= g.n; ++i) {
            CHECK(tab.q[k + 1][i] <= tab.q[k][i] + 1e-12);
            CHECK(tab.h[k][i] == doctest::Approx(tab.q[k][i] - tab.q[k + 1][i]).scale(1.0).epsilon(1e-14));
        }
    const double mu = mu_exact(g.T, m);
    CHECK(std::fabs(tab.mu.back() - mu) <= 1e-3 * mu + hitting_tail_estimate(tab, g.n));
}

TEST_CASE("mean hit count agrees with simulation") {
    const ModelParams m{3, 1.0, 0, 1};
    const auto model = DistanceChainModel::make(m);
    const double T = 20.0 / solve_lambda(0, m).lambda;
    const long N = 20000;
    const auto counts = hitting_counts(model, T, N, 7);
    Welford w;
    for (int c : counts) w.add(c);
    const MeanEstimate e = w.result();
    CHECK(std::fabs(e.mean - mu_exact(T, m)) <= 4 * e.sd / std::sqrt(double(N)));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(make_grid(0.0, 10), ValidationError);
    CHECK_THROWS_AS(make_grid(1.0, 1), ValidationError);
    CHECK_THROWS_AS(mu_exact(-1.0, ModelParams{}), ValidationError);
}

}
