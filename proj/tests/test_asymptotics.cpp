#include <cmath>
#include <complex>

#include "doctest.h"
#include "padic/asymptotics.hpp"
#include "padic/hitting.hpp"
#include "padic/spectrum.hpp"
#include "padic/transforms.hpp"

using namespace padic;
using cd = std::complex<double>;

TEST_SUITE("asymptotics") {

TEST_CASE("complex gamma: values and identities") {
    CHECK(complex_gamma(0.5).real() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-15));
    CHECK(complex_gamma(5.0).real() == doctest::Approx(24.0).epsilon(1e-14));
    for (double x : {0.3, 2.5, 11.0}) CHECK(complex_lgamma(x).real() == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
    const cd z(0.3, 2.0);
    const cd refl = complex_gamma(z) * complex_gamma(1.0 - z) * std::sin(M_PI * z) / M_PI;
    CHECK(std::abs(refl - 1.0) < 1e-13);
    for (double x = 0.2; x < 20; x += 1.7)
        for (double y = -40; y <= 40; y += 7.3) {
            const cd w(x, y);
            CHECK(std::abs(complex_gamma(w + 1.0) - w * complex_gamma(w)) <= 1e-12 * std::abs(complex_gamma(w + 1.0)));
        }
    for (double y : {1.0, 10.0}) {
        const double e = M_PI / std::cosh(M_PI * y);
        CHECK(std::norm(complex_gamma(cd(0.5, y))) == doctest::Approx(e).epsilon(1e-12));
    }
    CHECK_THROWS_AS(complex_gamma(-2.0), NumericalError);
}

TEST_CASE("log-periodic sum: geometric case") {
    const LogPeriodicSpec s{2, 4, 0, 5};
    for (double t = 1e4 * s.b; t < 1e9; t *= 3.1)
        CHECK(log_periodic_direct(s, t) / log_periodic_sum(s, t).value == doctest::Approx(1.0).epsilon(1e-4));
    // S(bt) = (S(t) + e^{-t})/a
    for (double t = 0.1; t < 1e5; t *= 2.3)
        CHECK(log_periodic_direct(s, s.b * t) == doctest::Approx((log_periodic_direct(s, t) + std::exp(-t)) / s.a).epsilon(1e-13));
}

TEST_CASE("log-periodic sum metadata") {
    const LogPeriodicSpec s{3, 2, 0, 5};
    const AsymptoteResult r = log_periodic_sum(s, 1e6);
    CHECK(r.leading_exponent == doctest::Approx(-std::log(3.0) / std::log(2.0)));
    CHECK(r.log_period == doctest::Approx(std::log(2.0)));
    CHECK(r.imag_residue < 1e-12);
    CHECK_THROWS(log_periodic_sum(s, 0.5));
}

TEST_CASE("slope fit removes a log-periodic modulation") {
    const double P = std::log(4.0);
    auto g = [&](double t) { return std::pow(t, -1.5) * (1 + 0.2 * std::cos(2 * M_PI * std::log(t) / P)); };
    const SlopeFit f = period_averaged_slope(g, std::log(1e3), P, 4);
    CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-6));
    CHECK(f.windows >= 4);
}

TEST_CASE("density asymptote at alpha = 2") {
    const ModelParams m{2, 2.0, 0, 1};
    const Spectrum sp = build_spectrum(m, std::min(400, max_spectrum_k(m)));
    const DeltaLimit lim = delta_limit(m, 60);
    const double t = 1e7 / sp.lines[0].lambda;
    CHECK(f_series(t, sp) / f_asymptote(t, m, lim).value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("mean hit count limit for alpha < 1 is the renewal value") {
    for (const ModelParams m : {ModelParams{2, 0.5, 0, 1}, ModelParams{5, 0.5, -1, 2}}) {
        CHECK(mu_limit(m) == doctest::Approx(F0_closed(m) / (1 - Fret0_closed(m))).epsilon(1e-10));
        CHECK(mu_exact(1e12, m) == doctest::Approx(mu_limit(m)).epsilon(1e-4));
    }
}

TEST_CASE("alpha = 1 logarithmic increment") {
    const ModelParams m{3, 1.0, 0, 2};
    const double t = 1e7;
    const double incr = (mu_exact(10 * t, m) - mu_exact(t, m)) / std::log(10.0);
    CHECK(incr == doctest::Approx(mu_log_slope(m)).epsilon(1e-4));
    CHECK(mu_log_slope_literal(m) == doctest::Approx(mu_log_slope(m) / norm_a(m)));
}

TEST_CASE("I0 and the squared lattice sum") {
    const ModelParams m{3, 1.5, 0, 2};
    CHECK(i0_constant(m) > 0);
    const SeriesValue v = lattice_sum_sq(m, 0.1);
    CHECK(v.converged);
    CHECK(v.value > 0);
}

}
