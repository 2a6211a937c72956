#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "opjensen/coefficient.hpp"

using namespace opjensen;

TEST_CASE("paper-literal coefficients of the named families") {
    // h(t)/t is 1, c/t, t^{s-1}, t^{-2}, t^{-1-s}: infimum over (0,1) is 1
    // except for the constant family where it is c.
    CHECK(jensen_coefficient(HFunction::identity(), CoefficientPolicy::paper()) == 1.0);
    CHECK(jensen_coefficient(HFunction::power(0.5), CoefficientPolicy::paper()) == 1.0);
    CHECK(jensen_coefficient(HFunction::reciprocal(), CoefficientPolicy::paper()) == 1.0);
    CHECK(jensen_coefficient(HFunction::reciprocal_power(0.7), CoefficientPolicy::paper()) == 1.0);
    CHECK(jensen_coefficient(HFunction::constant(3.0), CoefficientPolicy::paper()) == 3.0);
}

TEST_CASE("safe coefficients") {
    CHECK(jensen_coefficient(HFunction::power(0.5), CoefficientPolicy::safe()) ==
          Catch::Approx(std::sqrt(2.0)).margin(1e-15));
    CHECK(jensen_coefficient(HFunction::reciprocal(), CoefficientPolicy::safe()) == 4.0);
    CHECK(jensen_coefficient(HFunction::identity(), CoefficientPolicy::safe()) == 1.0);
}

TEST_CASE("classification table") {
    CHECK(classify_coefficient(HFunction::identity()) == 1.0);
    CHECK(classify_coefficient(HFunction::constant(1.0)) == 2.0);
    CHECK(classify_coefficient(HFunction::power(0.3)) ==
          Catch::Approx(std::pow(2.0, 0.7)).margin(1e-15));
    CHECK(classify_coefficient(HFunction::reciprocal()) == 4.0);
    CHECK(classify_coefficient(HFunction::reciprocal_power(1.0)) == 4.0);
    CHECK_THROWS_AS(classify_coefficient(HFunction::tabulated("t", [](double t) { return t; })),
                    ConfigError);
}

TEST_CASE("classification agrees with 2 h(1/2) across parameter draws") {
    Rng rng(2024);
    for (int k = 0; k < 20; ++k) {
        const double s = rng.uniform(0.05, 1.0);
        const double c = rng.uniform(0.1, 5.0);
        for (const auto& h : {HFunction::identity(), HFunction::constant(c), HFunction::power(s),
                              HFunction::reciprocal(), HFunction::reciprocal_power(s)}) {
            REQUIRE(std::abs(classify_coefficient(h) - 2.0 * h(0.5)) <= 1e-12);
            REQUIRE(std::abs(classify_coefficient(h) -
                             jensen_coefficient(h, CoefficientPolicy::safe())) <= 1e-12);
        }
    }
}

TEST_CASE("safe equals pointwise at one half exactly") {
    for (const auto& h : {HFunction::identity(), HFunction::constant(2.5), HFunction::power(0.37),
                          HFunction::reciprocal(), HFunction::reciprocal_power(0.8)}) {
        CHECK(jensen_coefficient(h, CoefficientPolicy::safe()) ==
              jensen_coefficient(h, CoefficientPolicy::pointwise(0.5)));
    }
}

TEST_CASE("pointwise dominates safe on the lower half for decreasing h/t") {
    Rng rng(99);
    for (const auto& h : {HFunction::identity(), HFunction::constant(1.0), HFunction::power(0.5),
                          HFunction::reciprocal(), HFunction::reciprocal_power(0.5)}) {
        const double safe = jensen_coefficient(h, CoefficientPolicy::safe());
        for (int k = 0; k < 50; ++k) {
            const double lambda = rng.uniform(1e-6, 0.5);
            REQUIRE(jensen_coefficient(h, CoefficientPolicy::pointwise(lambda)) >=
                    safe - 1e-12);
        }
    }
}

TEST_CASE("h over t monotonicity oracle") {
    CHECK(is_h_over_t_decreasing(HFunction::reciprocal(), 100));
    CHECK(is_h_over_t_decreasing(HFunction::identity(), 100));  // constant, weakly decreasing
    CHECK_FALSE(is_h_over_t_decreasing(
        HFunction::tabulated("t^2", [](double t) { return t * t; }), 100));
}

TEST_CASE("tabulated h goes through the grid search") {
    // h(t) = t/2 keeps h/t constant at 1/2.
    const auto half = HFunction::tabulated("t/2", [](double t) { return 0.5 * t; });
    CHECK(jensen_coefficient(half, CoefficientPolicy::paper()) == Catch::Approx(0.5).margin(1e-9));

    // h vanishing on part of the grid drives the infimum to 0.
    const auto hinge =
        HFunction::tabulated("relu(t-1/2)", [](double t) { return std::max(0.0, t - 0.5); });
    CHECK(jensen_coefficient(hinge, CoefficientPolicy::paper()) == 0.0);

    // A divergent ratio is reported as the +inf sentinel.
    const auto huge = HFunction::tabulated("1e15", [](double) { return 1e15; });
    CHECK(std::isinf(jensen_coefficient(huge, CoefficientPolicy::paper())));

    const auto bad = HFunction::tabulated("t-0.9", [](double t) { return t - 0.9; });
    CHECK_THROWS_AS(jensen_coefficient(bad, CoefficientPolicy::paper()), NonnegativityError);
}

TEST_CASE("policy parsing") {
    CHECK(CoefficientPolicy::parse("safe").mode == CoefficientPolicy::Mode::Safe);
    CHECK(CoefficientPolicy::parse("paper").mode == CoefficientPolicy::Mode::PaperLiteral);
    const auto pw = CoefficientPolicy::parse("pointwise:0.63");
    CHECK(pw.mode == CoefficientPolicy::Mode::PointwiseLambda);
    CHECK(pw.lambda == 0.63);
    CHECK(CoefficientPolicy::parse(pw.to_string()).lambda == 0.63);
    CHECK_THROWS_AS(CoefficientPolicy::parse("pointwise:1.5"), ConfigError);
    CHECK_THROWS_AS(CoefficientPolicy::parse("loose"), ParseError);
}

TEST_CASE("h-convexity oracle accepts the known pairs") {
    const SpectrumInterval iv(1.0, 4.0);
    CHECK(check_h_convex(ScalarFunction::sqrt_fn(), HFunction::power(0.5), iv, 2000, 17).holds);
    CHECK(check_h_convex(ScalarFunction::affine(1.0, 0.0), HFunction::identity(), iv, 2000, 17)
              .holds);
    CHECK(check_h_convex(ScalarFunction::square(), HFunction::identity(), iv, 2000, 17).holds);
}

TEST_CASE("h-convexity violations come with a self-verifying witness") {
    const auto h2 = HFunction::tabulated("t^2", [](double t) { return t * t; });
    const SpectrumInterval iv(1.0, 2.0);
    const auto witness = check_h_convex(ScalarFunction::square(), h2, iv, 5000, 3);
    REQUIRE_FALSE(witness.holds);
    REQUIRE(witness.violation.has_value());
    const auto& v = *witness.violation;
    const auto f = ScalarFunction::square();
    const double lhs = f(v.lambda * v.u + (1.0 - v.lambda) * v.v);
    const double rhs = h2(v.lambda) * f(v.u) + h2(1.0 - v.lambda) * f(v.v);
    CHECK(lhs == Catch::Approx(v.lhs).margin(1e-12));
    CHECK(rhs == Catch::Approx(v.rhs).margin(1e-12));
    CHECK(lhs > rhs + 1e-9 * std::max(1.0, std::abs(rhs)));
}

TEST_CASE("nonnegativity of f is enforced by sampling") {
    const SpectrumInterval iv(1.0, 2.0);
    CHECK_THROWS_AS(
        check_h_convex(ScalarFunction::affine(1.0, -10.0), HFunction::identity(), iv, 100, 1),
        NonnegativityError);
}

TEST_CASE("affine nonnegative f stays h-convex for identity h") {
    Rng rng(555);
    for (int k = 0; k < 1000; ++k) {
        const double a = rng.uniform(0.0, 3.0);
        const double b = rng.uniform(0.0, 3.0);
        const double m = rng.uniform(0.1, 2.0);
        const SpectrumInterval iv(m, m + rng.uniform(0.1, 3.0));
        const auto w =
            check_h_convex(ScalarFunction::affine(a, b), HFunction::identity(), iv, 20, k);
        REQUIRE(w.holds);
    }
}
