#include <cmath>

#include "doctest.h"
#include "padic/laplace.hpp"
#include "padic/spectrum.hpp"
#include "padic/transforms.hpp"

using namespace padic;

namespace {
const ModelParams kPoints[] = {{2, 0.5, 0, 1}, {2, 1.0, -1, 2}, {3, 1.5, 1, 3}, {5, 2.0, 0, 4}, {3, 0.5, 1, 2}};
}

TEST_SUITE("transforms") {

TEST_CASE("passage transform: E/J and 1 - I/J agree") {
    for (const auto& m : kPoints)
        for (double s : {1e-6, 1e-3, 0.1, 1.0, 30.0}) {
            const double a = eval_F_passage(s, m).value, b = eval_F_passage_alt(s, m).value;
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
            CHECK(a > 0);
            CHECK(a < 1);
        }
}

TEST_CASE("E = J - I") {
    for (const auto& m : kPoints)
        for (double s : {0.01, 1.0}) {
            const double I = finite_part_I(s, m);
            CHECK(eval_E(s, m).value == doctest::Approx(eval_J(s, m).value - I).epsilon(1e-12));
        }
}

TEST_CASE("total probabilities at s -> 0") {
    for (const auto& m : kPoints) {
        if (m.alpha < 1) {
            // the lattice sums converge at s = 0 itself
            CHECK(eval_F_passage(0.0, m).value == doctest::Approx(F0_closed(m)).epsilon(1e-12));
            CHECK(eval_F_return(0.0, m).value == doctest::Approx(Fret0_closed(m)).epsilon(1e-12));
            continue;
        }
        // 1 - F(s) decays like (s/lambda_0)^{(alpha-1)/alpha}, or 1/ln(lambda_0/s) at alpha = 1
        const double l0 = solve_lambda(0, m).lambda;
        double prev = 0.0;
        for (double c : {1e-4, 1e-8, 1e-12}) {
            const double f = eval_F_passage(c * l0, m).value;
            CHECK(f > prev);
            prev = f;
        }
        if (m.alpha > 1) {
            const double d8 = 1 - eval_F_passage(1e-8 * l0, m).value, d12 = 1 - eval_F_passage(1e-12 * l0, m).value;
            CHECK(d8 / d12 == doctest::Approx(std::pow(1e4, (m.alpha - 1) / m.alpha)).epsilon(0.1));
        }
    }
}

TEST_CASE("large-s behaviour gives the density at zero") {
    // s F(s) -> f(0+)
    for (const auto& m : kPoints) {
        const double s = 1e5;
        CHECK(s * eval_F_passage(s, m).value == doctest::Approx(f0_closed(m)).epsilon(1e-3));
    }
}

TEST_CASE("return transform from J") {
    for (const auto& m : kPoints) {
        const double s = 0.3;
        const double fr = eval_F_return(s, m).value;
        const double J = eval_J(s, m).value;
        CHECK(fr == doctest::Approx(1 - 1 / (std::pow(double(m.p), m.r) * (b_alpha_r(m) + s) * J)).epsilon(1e-13));
    }
}

TEST_CASE("multiprecision generic transform matches double") {
    for (const auto& m : kPoints) {
        const double s = 0.7;
        const double d = eval_F_passage(s, m).value;
        const mp50 hi = F_generic(mp50(s), m, 1e-40);
        CHECK(double(hi) == doctest::Approx(d).epsilon(1e-13));
    }
}

TEST_CASE("term-wise integral of epsilon matches quadrature") {
    const ModelParams m{3, 1.5, 0, 2};
    const double t = 4.0;
    const int n = 4000;
    double q = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        q += w * epsilon_fund(t * i / n, m).value;
    }
    q *= t / n;
    CHECK(epsilon_integral(t, m).value == doctest::Approx(q).epsilon(1e-6));
}

TEST_CASE("pole proximity is reported, not returned") {
    const ModelParams m{2, 1.0, 0, 1};
    CHECK_THROWS_AS(eval_J(-1.0, m), NumericalError);
}

}
