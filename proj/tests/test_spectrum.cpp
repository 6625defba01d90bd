#include <cmath>
#include <limits>

#include "doctest.h"
#include "padic/hitting.hpp"
#include "padic/io.hpp"
#include "padic/spectrum.hpp"
#include "padic/transforms.hpp"

using namespace padic;

TEST_SUITE("spectrum") {

TEST_CASE("roots are zeros of J_r(-lambda) inside the bracket") {
    for (const ModelParams m : {ModelParams{2, 1.5, 0, 2}, ModelParams{5, 0.5, -1, 2}, ModelParams{3, 1.0, 1, 4}})
        for (int k = 0; k < 12; ++k) {
            const SpectralLine l = solve_lambda(k, m);
            const DeltaBracket b = delta_bracket(k, m);
            CHECK(l.delta > b.lower);
            CHECK(l.delta < b.upper);
            CHECK(l.residual < 1e-12);
            CHECK(l.lambda == doctest::Approx(std::pow(double(m.p), -m.alpha * (m.r + k)) *
                                              (std::pow(double(m.p), -m.alpha) + l.delta))
                                  .epsilon(1e-15));
        }
}

TEST_CASE("residue routes agree") {
    const ModelParams m{3, 1.5, 0, 2};
    for (int k = 0; k < 40; ++k) {
        const ResidueDetail d = residue_detail(solve_lambda(k, m), m);
        // the E numerator cancels, so agreement is limited by its condition number
        const double eps = std::numeric_limits<double>::epsilon();
        CHECK(std::fabs(d.shifted_I - d.shifted_E) <= 16 * eps * (d.cond_I + d.cond_E) * std::fabs(d.shifted_I));
        if (!std::isnan(d.compact)) CHECK(std::fabs(d.compact - d.value) <= d.err + d.compact_err);
    }
}

TEST_CASE("residue signs: negative below the target shell, positive from k = nu - r on") {
    const ModelParams m{2, 1.5, 0, 3};
    const Spectrum sp = build_spectrum(m, 30);
    for (const auto& l : sp.lines)
        if (l.k >= m.nu - m.r) CHECK(l.residue > 0);
}

TEST_CASE("sound Laplace sum rule") {
    for (const ModelParams m : {ModelParams{2, 0.5, 0, 1}, ModelParams{3, 2.0, -1, 1}, ModelParams{5, 1.0, 1, 3}}) {
        const Spectrum sp = build_spectrum(m, 60);
        for (double c : {0.1, 1.0, 10.0}) {
            const double s = c * sp.lines[0].lambda;
            const double d = eval_F_passage(s, m).value - f_laplace_partial(s, sp);
            CHECK(d >= -1e-15);
            CHECK(d <= sp.tail_bound / s + 1e-15);
        }
        CHECK(std::fabs(sp.sum_b - f0_closed(m)) <= sp.tail_bound);
    }
}

TEST_CASE("tail target grows K") {
    const ModelParams m{2, 0.5, 0, 1};
    const Spectrum a = build_spectrum(m, 5);
    const Spectrum b = build_spectrum(m, 5, 1e-12);
    CHECK(b.K > a.K);
    CHECK(b.tail_bound <= 1e-12);
}

TEST_CASE("CDF is the integral of the density") {
    const ModelParams m{3, 1.5, 0, 2};
    const Spectrum sp = build_spectrum(m, 60);
    const TimeGrid g = make_grid(10.0 / sp.lines[0].lambda, 4000);
    const auto c = trap_cumulative(sample(g, [&](double t) { return f_series(t, sp); }), g.h);
    CHECK(c.back() == doctest::Approx(f_cdf_series(g.T, sp)).epsilon(1e-6));
}

TEST_CASE("first-kind residual detects a corrupted density") {
    const ModelParams m{2, 1.5, 0, 2};
    const Spectrum sp = build_spectrum(m, 60);
    const TimeGrid g = make_grid(10.0 / sp.lines[0].lambda, 2000);
    auto f = sample(g, [&](double t) { return f_series(t, sp); });
    const double good = volterra1_residual(f, g, m);
    for (int i = 0; i <= g.n; ++i) f[i] *= 1.0 + 0.01 * std::sin(g.t(i) * sp.lines[0].lambda);
    const double bad = volterra1_residual(f, g, m);
    CHECK(bad >= 10 * good);
}

TEST_CASE("return series and its Talbot shadow") {
    const ModelParams m{3, 0.5, 0, 2};
    const ReturnSpectrum rs = build_return_spectrum(m, 60);
    for (double t : {0.5, 5.0, 50.0}) {
        const ShadowedValue v = f_ret_series(t, rs);
        CHECK_FALSE(v.flagged);
        CHECK(v.series == doctest::Approx(v.shadow).epsilon(1e-6));
    }
}

TEST_CASE("delta limits converge") {
    for (const ModelParams m : {ModelParams{2, 2.0, 0, 1}, ModelParams{3, 0.5, 0, 2}, ModelParams{2, 1.0, 0, 1}}) {
        const DeltaLimit d = delta_limit(m, 60);
        CHECK(d.converged);
        CHECK(std::isfinite(d.limit));
    }
}

TEST_CASE("spectrum JSON round trip is exact") {
    const Spectrum sp = build_spectrum({2, 1.5, 0, 2}, 20);
    const Spectrum back = spectrum_from_json(spectrum_to_json(sp));
    CHECK(back.K == sp.K);
    CHECK(back.f0 == sp.f0);
    CHECK(back.tail_bound == sp.tail_bound);
    REQUIRE(back.lines.size() == sp.lines.size());
    for (size_t i = 0; i < sp.lines.size(); ++i) {
        CHECK(back.lines[i].lambda == sp.lines[i].lambda);
        CHECK(back.lines[i].residue == sp.lines[i].residue);
        CHECK(back.lines[i].residue_err == sp.lines[i].residue_err);
    }
}

}
