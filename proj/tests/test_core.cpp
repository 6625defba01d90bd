#include <cmath>

#include "doctest.h"
#include "padic/core.hpp"

using namespace padic;

TEST_SUITE("core") {

TEST_CASE("primes") {
    CHECK(is_prime(2));
    CHECK(is_prime(5));
    CHECK(is_prime(999983));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(9));
    CHECK_FALSE(is_prime(-3));
}

TEST_CASE("parameter validation names each problem") {
    CHECK_NOTHROW(validate_params({2, 1.5, 0, 2}));
    try {
        validate_params({9, -1.0, 3, 1});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.problems().size() == 3);
        CHECK(e.problems()[0].find("p not prime") != std::string::npos);
    }
    CHECK_THROWS_AS(validate_params({2, 1.0, 0, 0}), ValidationError);
}

TEST_CASE("integer powers are exact and range-checked") {
    CHECK(pow_p(3, 5) == 243.0);
    CHECK(pow_p(2, -3) == 0.125);
    CHECK_THROWS_AS(pow_p(2, 2000), NumericalError);
    CHECK_THROWS_AS(pow_p(5, -600), NumericalError);
}

TEST_CASE("kernel constant and exit rate") {
    // kappa = (p^alpha - 1)/(1 - p^{-alpha-1}); B = p^{-alpha r}(1-1/p)/(1 - p^{-alpha-1})
    const ModelParams m{3, 2.0, 1, 2};
    CHECK(kernel_const(3, 2.0) == doctest::Approx(8.0 / (1 - 1.0 / 27)).epsilon(1e-15));
    CHECK(b_alpha_r(m) == doctest::Approx((1.0 / 9) * (2.0 / 3) / (1 - 1.0 / 27)).epsilon(1e-15));
    CHECK(kernel_const(3, 2.0) == doctest::Approx(-1.0 / gamma_p_neg(3, 2.0)).epsilon(1e-14));
    CHECK(norm_a(m) == 9.0);
}

}
