#include <cmath>

#include "doctest.h"
#include "padic/kernels.hpp"
#include "padic/spectrum.hpp"
#include "padic/transforms.hpp"

using namespace padic;

TEST_SUITE("kernels") {

TEST_CASE("power kernel symbol and exit rate") {
    for (const ModelParams m : {ModelParams{2, 0.5, 0, 1}, ModelParams{5, 2.0, -1, 1}}) {
        const KernelSpec k = KernelSpec::power(m.alpha);
        for (int n = -5; n <= 30; ++n)
            CHECK(kernel_symbol(k, n, m).value == doctest::Approx(std::pow(double(m.p), -m.alpha * n)).epsilon(1e-13));
        CHECK(kernel_exit_rate(k, m).value == doctest::Approx(b_alpha_r(m)).epsilon(1e-13));
    }
}

TEST_CASE("general return transform reduces to the power case") {
    const ModelParams m{3, 1.5, 1, 3};
    const KernelSpec k = KernelSpec::power(1.5);
    for (double s : {1e-4, 0.01, 1.0})
        CHECK(eval_F_return_general(s, k, m).value == doctest::Approx(eval_F_return(s, m).value).epsilon(1e-12));
}

TEST_CASE("exponential kernel symbol is nonincreasing in n") {
    const ModelParams m{2, 1.0, 0, 1};
    const KernelSpec k = KernelSpec::exponential(1.0);
    double prev = INFINITY;
    for (int n = -3; n < 20; ++n) {
        const double w = kernel_symbol(k, n, m).value;
        CHECK(w <= prev);
        CHECK(w >= 0);
        prev = w;
    }
    const double fr = eval_F_return_general(0.01, k, m).value;
    CHECK(fr > 0);
    CHECK(fr < 1);
}

TEST_CASE("logarithmic kernel diverges for alpha <= 1") {
    const ModelParams m{2, 1.0, 0, 1};
    CHECK_THROWS_AS(kernel_exit_rate(KernelSpec::logarithmic(1.0), m), NumericalError);
}

TEST_CASE("custom symbol tables are checked") {
    CHECK_THROWS_AS(check_symbol_table(KernelSpec::custom(0, {1.0, 2.0})), ValidationError);
    CHECK_THROWS_AS(check_symbol_table(KernelSpec::custom(0, {1.0, -0.5})), ValidationError);
    CHECK_NOTHROW(check_symbol_table(KernelSpec::custom(0, {1.0, 0.5, 0.25})));
    CHECK_THROWS_AS(parse_kernel("cauchy", 1.0), ValidationError);
}

}
