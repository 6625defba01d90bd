#include <cmath>
#include <complex>

#include "doctest.h"
#include "padic/laplace.hpp"

using namespace padic;

TEST_SUITE("laplace") {

TEST_CASE("Stehfest weights reproduce the constant function") {
    for (int n : {8, 14, 28}) {
        const auto V = stehfest_weights<mp50>(n);
        mp50 s = 0;
        for (int k = 1; k <= n; ++k) s += V[k] / k;
        CHECK(double(s) == doctest::Approx(1.0).epsilon(1e-30));
    }
}

TEST_CASE("Gaver-Stehfest known pairs in 50 digits") {
    // 1/(s+1) -> e^{-t}; 1/(s+1)^2 -> t e^{-t}; 1/sqrt(s) -> 1/sqrt(pi t)
    for (double t : {0.1, 1.0, 5.0}) {
        const mp50 T(t);
        auto e1 = gaver_stehfest<mp50>([](const mp50& s) { return 1 / (s + 1); }, T, 28);
        auto e2 = gaver_stehfest<mp50>([](const mp50& s) { return 1 / ((s + 1) * (s + 1)); }, T, 28);
        auto e3 = gaver_stehfest<mp50>([](const mp50& s) { return 1 / sqrt(s); }, T, 28);
        CHECK(double(e1) == doctest::Approx(std::exp(-t)).epsilon(1e-8));
        CHECK(double(e2) == doctest::Approx(t * std::exp(-t)).epsilon(1e-8));
        CHECK(double(e3) == doctest::Approx(1 / std::sqrt(M_PI * t)).epsilon(1e-8));
    }
}

TEST_CASE("Talbot known pairs") {
    for (double t : {0.5, 2.0, 10.0}) {
        const double v = talbot([](std::complex<double> s) { return 1.0 / (s + 2.0); }, t, 24);
        CHECK(v == doctest::Approx(std::exp(-2 * t)).epsilon(1e-10));
        const double w = talbot([](std::complex<double> s) { return 1.0 / (s * s + 1.0); }, t, 32);
        CHECK(w == doctest::Approx(std::sin(t)).epsilon(1e-8));
    }
}

TEST_CASE("double-precision inversion reports its own disagreement") {
    const auto r = laplace_invert([](double s) { return 1.0 / (s + 1.0); }, 1.0, 14);
    CHECK(r.reliable);
    CHECK(r.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-4));
    // a transform with a jump in f is hard for real-axis inversion
    const auto bad = laplace_invert([](double s) { return std::exp(-s) / s; }, 1.0, 14, 1e-8);
    CHECK_FALSE(bad.reliable);
}

}
