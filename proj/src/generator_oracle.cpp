#include "padic/generator_oracle.hpp"

#include <sstream>
#include <stdexcept>

#include "padic/core.hpp"

namespace padic {

namespace {

Rational rpow(int p, int e) {
    Rational x = 1;
    for (int i = 0; i < (e < 0 ? -e : e); ++i) x *= p;
    return e < 0 ? Rational(1) / x : x;
}

void add(OutcomeLaw& law, int key, const Rational& v) {
    if (v == 0) return;
    law[key] += v;
}

void check_setup(const OracleSetup& s) {
    std::vector<std::string> bad;
    if (!is_prime(s.p)) bad.push_back("p not prime");
    if (s.alpha < 1) bad.push_back("oracle needs a positive integer alpha");
    if (s.levels < 1 || s.levels > 6) bad.push_back("levels must be in [1, 6]");
    if (!bad.empty()) throw ValidationError(bad);
}

int valuation(long u, int p) {
    int v = 0;
    while (u % p == 0) u /= p, ++v;
    return v;
}

std::string label(long u, int p, int levels) {
    std::string s;
    for (int i = 0; i < levels; ++i, u /= p) s.insert(s.begin(), char('0' + u % p));
    return s;
}

}  // namespace

OutcomeLaw step_law(int p, int r, int d, int m) {
    if (d < r + 1 || m < r + 1) throw ValidationError({"step law needs d, m >= r+1"});
    OutcomeLaw law;
    if (m < d) {
        law[d] = 1;
    } else if (m > d) {
        law[m] = 1;
    } else {
        add(law, kHitOutcome, rpow(p, r - d) * p / (p - 1));
        for (int l = r + 1; l <= d - 1; ++l) add(law, l, rpow(p, l - d));
        add(law, d, Rational(p - 2, p - 1));
    }
    return law;
}

Rational exact_kernel_const(const OracleSetup& s) {
    return (rpow(s.p, s.alpha) - 1) / (1 - rpow(s.p, -s.alpha - 1));
}

Rational exact_exit_rate(const OracleSetup& s) {
    return rpow(s.p, -s.alpha * s.r) * (1 - Rational(1, s.p)) / (1 - rpow(s.p, -s.alpha - 1));
}

OutcomeLaw chain_jump_law(const OracleSetup& s, int d) {
    check_setup(s);
    const int top = s.r + s.levels;
    if (d < s.r + 1 || d > top) throw ValidationError({"d outside the truncated hierarchy"});
    const Rational q = rpow(s.p, -s.alpha);
    OutcomeLaw law;
    Rational qi = 1;
    for (int i = 0; s.r + 1 + i <= top; ++i, qi *= q) {
        const Rational pi = (1 - q) * qi;
        for (const auto& [k, v] : step_law(s.p, s.r, d, s.r + 1 + i)) add(law, k > top ? kOuterOutcome : k, pi * v);
    }
    // exponents above the hierarchy: P(i >= levels) = q^levels, landing at that exponent
    add(law, kOuterOutcome, qi);
    return law;
}

std::vector<EnumeratedRow> enumerated_generator(const OracleSetup& s) {
    check_setup(s);
    const int p = s.p, L = s.levels, top = s.r + L;
    long n = 1;
    for (int i = 0; i < L; ++i) n *= p;
    const Rational kappa = exact_kernel_const(s);
    const Rational pr = rpow(p, s.r);
    // jumps beyond B_{r+L}: (1-1/p) kappa sum_{m>top} p^{-alpha m}
    const Rational q = rpow(p, -s.alpha);
    const Rational outer = (1 - Rational(1, p)) * kappa * rpow(p, -s.alpha * (top + 1)) / (1 - q);
    auto dist_exp = [&](long u, long w) { return top - valuation(((u - w) % n + n) % n, p); };
    std::vector<EnumeratedRow> rows;
    for (long x = 1; x < n; ++x) {
        EnumeratedRow row;
        row.from = label(x, p, L);
        row.distance = dist_exp(x, 0);
        OutcomeLaw rates;
        for (long y = 0; y < n; ++y) {
            if (y == x) continue;
            const int m = dist_exp(x, y);
            const Rational rate = kappa * rpow(p, -m * (s.alpha + 1)) * pr;
            add(rates, y == 0 ? kHitOutcome : dist_exp(y, 0), rate);
        }
        add(rates, kOuterOutcome, outer);
        for (const auto& [k, v] : rates) row.total_rate += v;
        for (const auto& [k, v] : rates) row.law[k] = v / row.total_rate;
        rows.push_back(std::move(row));
    }
    return rows;
}

OracleComparison compare_generator(const OracleSetup& s) {
    OracleComparison out;
    const Rational B = exact_exit_rate(s);
    for (int d = s.r + 1; d <= s.r + s.levels; ++d)
        for (int m = s.r + 1; m <= s.r + s.levels + 1; ++m) {
            Rational tot = 0;
            for (const auto& [k, v] : step_law(s.p, s.r, d, m)) tot += v;
            if (tot != 1) {
                out.laws_normalized = false;
                out.mismatches.push_back("step law d=" + std::to_string(d) + " m=" + std::to_string(m) + " sums to " +
                                         tot.str());
            }
        }
    for (const auto& row : enumerated_generator(s)) {
        if (row.total_rate != B) {
            out.rates_match = false;
            out.mismatches.push_back("ball " + row.from + ": total rate " + row.total_rate.str() + " != B " + B.str());
        }
        const OutcomeLaw chain = chain_jump_law(s, row.distance);
        if (chain != row.law) {
            out.rows_match = false;
            out.mismatches.push_back("ball " + row.from + ": enumerated " + to_string(row.law) + " vs chain " +
                                     to_string(chain));
        }
    }
    return out;
}

std::string to_string(const OutcomeLaw& law) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [k, v] : law) {
        if (!first) os << ", ";
        first = false;
        if (k == kHitOutcome) os << "HIT";
        else if (k == kOuterOutcome) os << "OUT";
        else os << k;
        os << ": " << v.str();
    }
    os << '}';
    return os.str();
}

}  // namespace padic
