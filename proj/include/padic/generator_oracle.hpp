#pragma once

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace padic {

using Rational = boost::multiprecision::cpp_rational;

// Outcomes of one jump seen from distance exponent d: kHitOutcome, a distance
// exponent l in [r+1, r+levels], or kOuterOutcome for any exponent above r+levels.
inline constexpr int kHitOutcome = -1000000;
inline constexpr int kOuterOutcome = 1000000;

using OutcomeLaw = std::map<int, Rational>;

// Exact law of step_distance(d, m) for p prime, integer exponents.
OutcomeLaw step_law(int p, int r, int d, int m);

// alpha restricted to positive integers so every rate is rational.
struct OracleSetup {
    int p = 2;
    int alpha = 1;
    int r = 0;
    int levels = 3;  // hierarchy B_{r+levels}(a) split into p^levels r-balls
};

// One-jump law of the distance chain from distance d, with the outer shells lumped.
OutcomeLaw chain_jump_law(const OracleSetup& s, int d);

struct EnumeratedRow {
    std::string from;   // base-p label of the source r-ball
    int distance = 0;   // its distance exponent to the target ball
    Rational total_rate;
    OutcomeLaw law;
};

// Explicit generator: every r-ball of B_{r+levels}(a), pairwise kernel rates
// kappa p^{-m(alpha+1)} p^r, plus the exact mass of the outer shells.
std::vector<EnumeratedRow> enumerated_generator(const OracleSetup& s);

// B_alpha(r) and kappa in exact arithmetic
Rational exact_exit_rate(const OracleSetup& s);
Rational exact_kernel_const(const OracleSetup& s);

struct OracleComparison {
    bool rows_match = true;        // every enumerated row equals the chain law
    bool rates_match = true;       // every total rate equals B_alpha(r)
    bool laws_normalized = true;   // step_law sums to 1
    std::vector<std::string> mismatches;
};
OracleComparison compare_generator(const OracleSetup& s);

std::string to_string(const OutcomeLaw& law);

}  // namespace padic
