#include "doctest.h"
#include "padic/core.hpp"
#include "padic/generator_oracle.hpp"

using namespace padic;

TEST_SUITE("generator_oracle") {

TEST_CASE("hand-computed one-jump law, p = 3, alpha = 1, r = 0, d = 2") {
    const OutcomeLaw law = chain_jump_law({3, 1, 0, 3}, 2);
    CHECK(law.at(kHitOutcome) == Rational(1, 27));
    CHECK(law.at(1) == Rational(2, 27));
    CHECK(law.at(2) == Rational(7, 9));
    CHECK(law.at(3) == Rational(2, 27));
    CHECK(law.at(kOuterOutcome) == Rational(1, 27));
}

TEST_CASE("step laws are normalized") {
    for (int p : {2, 3, 5})
        for (int d = 1; d <= 6; ++d)
            for (int m = 1; m <= 7; ++m) {
                Rational s = 0;
                for (const auto& [k, v] : step_law(p, 0, d, m)) s += v;
                CHECK(s == 1);
            }
}

TEST_CASE("enumerated generator equals the distance chain") {
    for (int p : {2, 3})
        for (int a : {1, 2, 3})
            for (int r : {-1, 0, 2}) {
                const OracleComparison c = compare_generator({p, a, r, 3});
                CHECK(c.rows_match);
                CHECK(c.rates_match);
                CHECK(c.laws_normalized);
            }
}

TEST_CASE("oracle setup validation") {
    CHECK_THROWS_AS(enumerated_generator({4, 1, 0, 3}), ValidationError);
    CHECK_THROWS_AS(enumerated_generator({2, 0, 0, 3}), ValidationError);
    CHECK_THROWS_AS(step_law(2, 0, 0, 1), ValidationError);
}

}
