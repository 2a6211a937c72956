#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "opjensen/functions.hpp"
#include "opjensen/rng.hpp"

using namespace opjensen;

TEST_CASE("scalar function parsing round-trips") {
    CHECK(ScalarFunction::parse("square").spec() == "square");
    CHECK(ScalarFunction::parse("sqrt")(4.0) == 2.0);
    CHECK(ScalarFunction::parse("exp")(0.0) == 1.0);
    CHECK(ScalarFunction::parse("affine:2,1")(3.0) == 7.0);
    CHECK(ScalarFunction::parse("power:1.5")(4.0) == Catch::Approx(8.0));
    CHECK(ScalarFunction::parse("poly:1,0,2")(3.0) == 19.0);
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(ScalarFunction::parse("cosh"), ParseError);
    CHECK_THROWS_AS(ScalarFunction::parse("affine:1"), ParseError);
    CHECK_THROWS_AS(ScalarFunction::parse("power:x"), ParseError);
    try {
        ScalarFunction::parse("power:x");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 6);
    }
    CHECK_THROWS_AS(HFunction::parse("power:0.5,1"), ParseError);
    CHECK_THROWS_AS(HFunction::parse("bogus"), ParseError);
}

TEST_CASE("scalar function domain checks") {
    const auto root = ScalarFunction::sqrt_fn();
    CHECK(root.in_domain(0.0));
    CHECK_FALSE(root.in_domain(-1.0));
    CHECK_THROWS_AS(root(-1.0), FunctionDomainError);
    CHECK_THROWS_AS(ScalarFunction::power(-2.0), ConfigError);
}

TEST_CASE("derivative rules agree with central differences") {
    // |f'(t) - (f(t+d)-f(t-d))/2d| <= 1e-5 at d = 1e-6 on interior points
    const double delta = 1e-6;
    const std::vector<ScalarFunction> fs = {
        ScalarFunction::affine(2.0, 1.0),  ScalarFunction::square(),
        ScalarFunction::power(1.5),        ScalarFunction::sqrt_fn(),
        ScalarFunction::exp_fn(),          ScalarFunction::polynomial({1.0, -2.0, 0.5, 0.25})};
    Rng rng(314);
    for (const auto& f : fs) {
        for (int k = 0; k < 40; ++k) {
            const double t = rng.uniform(0.5, 3.0);
            const double fd = (f(t + delta) - f(t - delta)) / (2.0 * delta);
            REQUIRE(std::abs(f.deriv(t) - fd) <= 1e-5);
            const double sd = (f.deriv(t + delta) - f.deriv(t - delta)) / (2.0 * delta);
            REQUIRE(std::abs(f.deriv2(t) - sd) <= 1e-4 * std::max(1.0, std::abs(f.deriv2(t))));
        }
    }
}

TEST_CASE("h families evaluate as defined") {
    CHECK(HFunction::identity()(0.25) == 0.25);
    CHECK(HFunction::constant(3.0)(0.9) == 3.0);
    CHECK(HFunction::power(0.5)(0.25) == 0.5);
    CHECK(HFunction::reciprocal()(0.25) == 4.0);
    CHECK(HFunction::reciprocal_power(1.0)(0.25) == 4.0);
    CHECK(HFunction::parse("recpower:0.5")(0.25) == 2.0);
}

TEST_CASE("h validates parameters and domain") {
    CHECK_THROWS_AS(HFunction::power(0.0), ConfigError);
    CHECK_THROWS_AS(HFunction::power(1.5), ConfigError);
    CHECK_THROWS_AS(HFunction::reciprocal_power(2.0), ConfigError);
    CHECK_THROWS_AS(HFunction::constant(0.0), ConfigError);
    CHECK_THROWS_AS(HFunction::identity()(0.0), FunctionDomainError);
    CHECK_THROWS_AS(HFunction::identity()(1.5), FunctionDomainError);
}
