#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "padic/config.hpp"
#include "padic/io.hpp"

using namespace padic;

TEST_SUITE("io") {

TEST_CASE("17 significant digits, '.' separator") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
    CHECK(format_double(std::nan("")) == "nan");
    const double x = 0.12345678901234567;
    CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("CSV and JSON tables") {
    const Table t{{"t", "f", "f_ret", "cdf"}, {{0.0, 1.5, 0.0, 0.0}, {0.5, 0.25, 1.0 / 3, 0.5}}};
    const std::string csv = to_csv(t);
    CHECK(csv == "t,f,f_ret,cdf\n0,1.5,0,0\n0.5,0.25,0.33333333333333331,0.5\n");
    const std::string js = to_json(t);
    CHECK(js.find("\"columns\"") != std::string::npos);
    CHECK(js.find("0.3333333333333333") != std::string::npos);
    CHECK_THROWS_AS(write_output(Table{{"t"}, {}}, Format::Csv, "-"), ValidationError);
    CHECK_THROWS_AS(parse_format("xml"), ValidationError);
}

TEST_CASE("I/O errors carry the path") {
    try {
        write_text("x", "/nonexistent-dir/out.csv");
        FAIL("expected failure");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("/nonexistent-dir/out.csv") != std::string::npos);
    }
}

TEST_CASE("config round trip is lossless") {
    RunConfig c;
    c.p = 5;
    c.alpha = 0.1 + 0.2;
    c.r = -1;
    c.nu = 3;
    c.T = 1.0 / 3;
    c.seed = 18446744073709551615ull;
    c.kernel = "exp";
    c.format = "json";
    const RunConfig back = config_from_json(config_to_json(c));
    CHECK(back.p == c.p);
    CHECK(back.alpha == c.alpha);
    CHECK(back.T == c.T);
    CHECK(back.seed == c.seed);
    CHECK(back.kernel == c.kernel);
    CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("config file layering and unknown keys") {
    RunConfig base;
    base.alpha = 3.0;
    const RunConfig c = config_from_json(R"({"alpha": 1, "nu": 2})", base);
    CHECK(c.alpha == 1.0);
    CHECK(c.nu == 2);
    CHECK(c.p == 2);
    CHECK_THROWS_AS(config_from_json(R"({"alfa": 1})"), ValidationError);
    CHECK_THROWS_AS(config_from_json(R"({"p": "two"})"), ValidationError);
    CHECK_THROWS_AS(config_from_json("[1]"), ValidationError);
}

TEST_CASE("config bounds") {
    RunConfig c;
    CHECK_NOTHROW(validate(c));
    c.p = 9;
    c.steps = 1;
    c.format = "xml";
    try {
        validate(c);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.problems().size() == 3);
    }
}

}
