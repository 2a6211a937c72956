#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "opjensen/instance.hpp"
#include "opjensen/matrix.hpp"

using namespace opjensen;

namespace {

double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
    REQUIRE(a.dim() == b.dim());
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

// Reconstruction residual ||U diag(l) U^T - A||_max, the independent check
// that the decomposition actually factors A.
double reconstruction_residual(const SymMatrix& A, const EigenDecomposition& ed) {
    const int n = A.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += ed.eigenvectors(i, k) * ed.eigenvalues[(std::size_t)k] *
                       ed.eigenvectors(j, k);
            worst = std::max(worst, std::abs(acc - A(i, j)));
        }
    return worst;
}

double orthonormality_residual(const EigenDecomposition& ed) {
    const int n = ed.eigenvectors.rows();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += ed.eigenvectors(k, i) * ed.eigenvectors(k, j);
            worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

SymMatrix random_symmetric(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> e((std::size_t)n * n);
    for (auto& v : e) v = rng.normal();
    return SymMatrix(n, e);
}

}  // namespace

TEST_CASE("construction symmetrizes and validates") {
    SymMatrix a(2, {1.0, 3.0, 5.0, 2.0});
    CHECK(a(0, 1) == a(1, 0));
    CHECK(a(0, 1) == Catch::Approx(4.0));
    CHECK_THROWS_AS(SymMatrix(2, {1.0, 2.0}), DimensionError);
    CHECK_THROWS_AS(SymMatrix(0, {}), DimensionError);
}

TEST_CASE("eigh on diagonal input") {
    const auto ed = eigh(SymMatrix::diagonal({1.0, 2.0}));
    CHECK(ed.eigenvalues[0] == 1.0);
    CHECK(ed.eigenvalues[1] == 2.0);
    CHECK(ed.eigenvectors(0, 0) == 1.0);
    CHECK(ed.eigenvectors(1, 1) == 1.0);
    CHECK(ed.eigenvectors(0, 1) == 0.0);
}

TEST_CASE("eigh of the flip matrix") {
    // characteristic polynomial l^2 - 1 = 0 by hand
    const auto ed = eigh(SymMatrix(2, {0.0, 1.0, 1.0, 0.0}));
    CHECK(ed.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-12));
    CHECK(ed.eigenvalues[1] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("eigh reconstruction on a random 8x8") {
    const auto A = random_symmetric(8, 7);
    const auto ed = eigh(A);
    CHECK(reconstruction_residual(A, ed) <= 1e-10 * std::max(1.0, A.max_abs()));
    CHECK(orthonormality_residual(ed) <= 1e-10);
    for (std::size_t i = 1; i < ed.eigenvalues.size(); ++i)
        CHECK(ed.eigenvalues[i - 1] <= ed.eigenvalues[i]);
}

TEST_CASE("eigh rejects oversized operators") {
    CHECK_THROWS_AS(eigh(SymMatrix::zero(65)), DimensionError);
}

TEST_CASE("matrix_function identity and square") {
    const SymMatrix flip(2, {0.0, 1.0, 1.0, 0.0});
    const auto same = matrix_function(flip, ScalarFunction::affine(1.0, 0.0));
    CHECK(max_abs_diff(same, flip) <= 1e-10);

    // f(t)=t^2 on the flip matrix is the identity
    const auto squared = matrix_function(flip, ScalarFunction::square());
    CHECK(max_abs_diff(squared, SymMatrix::diagonal({1.0, 1.0})) <= 1e-10);

    const auto roots = matrix_function(SymMatrix::diagonal({1.0, 4.0}), ScalarFunction::sqrt_fn());
    CHECK(max_abs_diff(roots, SymMatrix::diagonal({1.0, 2.0})) <= 1e-12);
}

TEST_CASE("matrix_function rejects eigenvalues outside the domain") {
    const auto A = SymMatrix::diagonal({-1.0, 4.0});
    CHECK_THROWS_MATCHES(matrix_function(A, ScalarFunction::sqrt_fn()), FunctionDomainError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("-1.0")));
}

TEST_CASE("quadratic_form values") {
    const UnitVector half = UnitVector::normalized({1.0, 1.0});
    CHECK(quadratic_form(SymMatrix::diagonal({1.0, 0.0}), half) == Catch::Approx(0.5).margin(1e-15));

    // eigenvector of the smallest eigenvalue
    CHECK(quadratic_form(SymMatrix::diagonal({1.0, 2.0}), UnitVector({1.0, 0.0})) == 1.0);

    const UnitVector skew({std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0)});
    CHECK(quadratic_form(SymMatrix::diagonal({1.0, 2.0}), skew) ==
          Catch::Approx(4.0 / 3.0).margin(1e-14));

    CHECK_THROWS_AS(quadratic_form(SymMatrix::diagonal({1.0, 2.0, 3.0}), half), DimensionError);
}

TEST_CASE("spectrum_bounds and its error cases") {
    const auto iv = spectrum_bounds(SymMatrix::diagonal({1.0, 2.0}));
    CHECK(iv.m == 1.0);
    CHECK(iv.M == 2.0);
    CHECK_THROWS_AS(spectrum_bounds(SymMatrix::diagonal({3.0, 3.0})), DegenerateSpectrumError);
    CHECK_THROWS_AS(spectrum_bounds(SymMatrix::diagonal({-1.0, 2.0})), PositivityError);
}

TEST_CASE("block_diag composition") {
    const auto single = block_diag({SymMatrix::diagonal({1.0, 2.0})});
    CHECK(max_abs_diff(single, SymMatrix::diagonal({1.0, 2.0})) == 0.0);

    const auto two = block_diag({SymMatrix::diagonal({1.0}), SymMatrix::diagonal({2.0})});
    CHECK(max_abs_diff(two, SymMatrix::diagonal({1.0, 2.0})) == 0.0);

    const auto four =
        block_diag({SymMatrix::diagonal({1.0, 2.0}), SymMatrix::diagonal({2.0, 3.0})});
    CHECK(max_abs_diff(four, SymMatrix::diagonal({1.0, 2.0, 2.0, 3.0})) == 0.0);

    CHECK_THROWS_AS(block_diag({}), DimensionError);
}

TEST_CASE("matrix_function commutes with block_diag") {
    const auto f = ScalarFunction::exp_fn();
    const SymMatrix a = random_symmetric(3, 11);
    const SymMatrix b = random_symmetric(4, 12);
    const auto composed = matrix_function(block_diag({a, b}), f);
    const auto mapped = block_diag({matrix_function(a, f), matrix_function(b, f)});
    CHECK(max_abs_diff(composed, mapped) <= 1e-10);
}

TEST_CASE("polynomial functional calculus matches the matrix product") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto A = random_symmetric(6, seed);
        const auto via_calculus = matrix_function(A, ScalarFunction::square());
        // direct product A*A
        SymMatrix product = SymMatrix::zero(6);
        std::vector<double> e(36, 0.0);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                double acc = 0.0;
                for (int k = 0; k < 6; ++k) acc += A(i, k) * A(k, j);
                e[(std::size_t)i * 6 + j] = acc;
            }
        product = SymMatrix(6, e);
        REQUIRE(max_abs_diff(via_calculus, product) <= 1e-9);
    }
}

TEST_CASE("random_instance respects its contract") {
    const SpectrumInterval iv(1.0, 2.0);

    auto [a1, x1] = random_instance(1, iv, 5);
    CHECK(a1.dim() == 1);
    CHECK(a1(0, 0) >= 1.0);
    CHECK(a1(0, 0) <= 2.0);
    CHECK(std::abs(std::abs(x1[0]) - 1.0) <= 1e-12);

    auto [a4, x4] = random_instance(4, iv, 42);
    const auto bounds = spectrum_bounds(a4);
    CHECK(bounds.m >= 1.0 - 1e-10);
    CHECK(bounds.M <= 2.0 + 1e-10);

    auto [a4b, x4b] = random_instance(4, iv, 42);
    CHECK(a4.data() == a4b.data());
    CHECK(x4.components() == x4b.components());
}

TEST_CASE("quadratic form stays inside the spectrum hull") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto [A, x] = random_instance(2 + (int)(seed % 7), SpectrumInterval(1.0, 2.0), seed);
        const auto ed = eigh(A);
        const double g = quadratic_form(A, x);
        REQUIRE(g >= ed.eigenvalues.front() - 1e-10);
        REQUIRE(g <= ed.eigenvalues.back() + 1e-10);
    }
}

TEST_CASE("eigensolver contract over seeded matrices") {
    for (std::uint64_t seed = 100; seed < 160; ++seed) {
        const int n = 1 + (int)(seed % 16);
        const auto A = random_symmetric(n, seed);
        const auto ed = eigh(A);
        REQUIRE(reconstruction_residual(A, ed) <= 1e-10 * std::max(1.0, A.max_abs()));
        REQUIRE(orthonormality_residual(ed) <= 1e-10);
    }
}

TEST_CASE("unit vector and family validation") {
    CHECK_THROWS_AS(UnitVector({0.5, 0.5}), ConfigError);
    CHECK_NOTHROW(UnitVector({1.0, 0.0}));
    CHECK_THROWS_AS(VectorFamily({{1.0}, {1.0}}), ConfigError);
    const auto family = VectorFamily::normalized({{1.0, 0.0}, {1.0, 1.0}});
    double s = 0.0;
    for (const auto& v : family.vectors())
        for (double c : v) s += c * c;
    CHECK(s == Catch::Approx(1.0).margin(1e-13));
}
