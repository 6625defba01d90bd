#include <cmath>
#include <cstdlib>
#include <map>

#include "doctest.h"
#include "padic/generator_oracle.hpp"
#include "padic/io.hpp"
#include "padic/montecarlo.hpp"
#include "padic/spectrum.hpp"

using namespace padic;

TEST_SUITE("montecarlo") {

TEST_CASE("counter RNG is a pure function of (seed, path id)") {
    CounterRng a(5, 17), b(5, 17), c(5, 18), d(6, 17);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
        CHECK(x != d.next());
    }
    CounterRng u(1, 1);
    for (int i = 0; i < 10000; ++i) {
        const double v = u.uniform();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("uniforms pass a KS check at the DKW width") {
    CounterRng u(99, 0);
    std::vector<double> xs(50000);
    for (auto& x : xs) x = u.uniform();
    CHECK(ks_distance(xs, [](double x) { return x; }) <= dkw_half_width(50000, 0.001));
}

TEST_CASE("one step of the distance chain matches the exact law") {
    const ModelParams m{3, 1.0, 0, 3};
    const auto model = DistanceChainModel::make(m);
    const int d = 3;
    const OutcomeLaw law = step_law(3, 0, d, d);
    std::map<int, long> seen;
    const long n = 200000;
    CounterRng rng(11, 0);
    for (long i = 0; i < n; ++i) {
        const int out = step_distance(model, d, d, rng);
        ++seen[out == kHit ? kHitOutcome : out];
    }
    for (const auto& [k, v] : law) {
        const double p = v.convert_to<double>();
        const double z = std::fabs(double(seen[k]) / n - p) / std::sqrt(p * (1 - p) / n);
        CHECK(z < 4.5);
    }
    CHECK(seen.size() == law.size());
}

TEST_CASE("Welford merge equals a single pass") {
    Welford all, a, b;
    CounterRng r(3, 3);
    for (int i = 0; i < 1000; ++i) {
        const double x = r.exponential(2.0);
        all.add(x);
        (i < 400 ? a : b).add(x);
    }
    a.merge(b);
    CHECK(a.result().mean == doctest::Approx(all.result().mean).epsilon(1e-13));
    CHECK(a.result().sd == doctest::Approx(all.result().sd).epsilon(1e-12));
    CHECK(all.result().mean == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("batches do not depend on the worker count") {
    const auto model = DistanceChainModel::make({2, 1.5, 0, 2});
    setenv("PADIC_FPT_THREADS", "1", 1);
    const auto a = first_passage_batch(model, 100.0, 2000, 5);
    setenv("PADIC_FPT_THREADS", "4", 1);
    const auto b = first_passage_batch(model, 100.0, 2000, 5);
    unsetenv("PADIC_FPT_THREADS");
    REQUIRE(a.times.size() == b.times.size());
    for (size_t i = 0; i < a.times.size(); ++i) CHECK(a.times[i] == b.times[i]);
}

TEST_CASE("passage times follow the analytic CDF") {
    const ModelParams m{3, 1.5, 0, 1};
    const auto model = DistanceChainModel::make(m);
    const Spectrum sp = build_spectrum(m, 60);
    const double H = 1e3 / sp.lines[0].lambda;
    const auto b = first_passage_batch(model, H, 20000, 1);
    std::vector<double> xs;
    for (const auto& t : b.times)
        if (t) xs.push_back(*t);
    const double FH = f_cdf_series(H, sp);
    CHECK(ks_distance(xs, [&](double t) { return f_cdf_series(t, sp) / FH; }) <= dkw_half_width(long(xs.size()), 1e-3));
}

TEST_CASE("path CSV format") {
    const auto model = DistanceChainModel::make({2, 1.0, 0, 1});
    std::vector<ChainPath> ps{simulate_path(model, PathKind::FirstPassage, 1e4, 42, 0),
                              simulate_path(model, PathKind::FirstPassage, 1e4, 42, 1)};
    const std::string csv = paths_csv(ps);
    CHECK(csv.rfind("path_id,event_index,time,distance_exponent_or_HIT\n", 0) == 0);
    CHECK(csv.find("0,0,0,1\n") != std::string::npos);
    CHECK(csv.find("HIT") != std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv == paths_csv(ps));
}

}
