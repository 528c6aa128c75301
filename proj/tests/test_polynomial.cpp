#include "qubitfield/polynomial.hpp"

#include <doctest.h>

#include <random>

using namespace qubitfield;

namespace {

Polynomial v(int i) { return Polynomial::variable(i); }
Polynomial k(long long c) { return Polynomial::constant(Rational(c)); }

// Cofactor expansion along the first row.
BigInt laplace(const std::vector<std::vector<BigInt>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    BigInt det = 0;
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<std::vector<BigInt>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<BigInt> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != col) row.push_back(m[r][c]);
            minor.push_back(row);
        }
        const BigInt term = m[0][col] * laplace(minor);
        det += (col % 2 == 0) ? term : BigInt(-term);
    }
    return det;
}

} // namespace

TEST_CASE("arithmetic and printing") {
    const Polynomial p = v(0) - k(2) * v(1);
    const Polynomial sq = p * p;
    CHECK(sq.to_string() == "l0^2 - 4*l0*l1 + 4*l1^2");
    CHECK(sq == p.pow(2));
    CHECK(sq.degree() == 2);
    CHECK(sq.is_homogeneous(2));
    CHECK_FALSE((sq + k(1)).is_homogeneous(2));
    CHECK(sq.has_integer_coefficients());
    CHECK_FALSE((sq * Rational(1, 2)).has_integer_coefficients());
    CHECK((p - p).is_zero());
    CHECK(Polynomial().degree() == -1);
    CHECK(sq.leading_term().second == Rational(1));
    CHECK(total_degree(Exponent{1, 0, 2, 0, 0, 3}) == 6);

    const std::array<long long, kNumVars> x{3, 5, 0, 0, 0, 0};
    CHECK(sq.evaluate(x) == Rational(49));
    const std::array<double, kNumVars> xd{0.5, 0.25, 0, 0, 0, 0};
    CHECK(sq.evaluate(xd) == doctest::Approx(0.0));
    CHECK(Polynomial::linear({1, 0, 0, 2, 0, 0}) == v(0) + k(2) * v(3));
}

TEST_CASE("division") {
    const Polynomial f = v(0) - v(1) + k(2) * v(3);
    const Polynomial g = v(2) * v(2) + v(4) * v(5) - v(0);
    const DivisionResult exact = divide(f * g, f);
    CHECK(exact.remainder.is_zero());
    CHECK(exact.quotient == g);
    const DivisionResult inexact = divide(f * g + v(5), f);
    CHECK_FALSE(inexact.remainder.is_zero());
    CHECK(inexact.quotient * f + inexact.remainder == f * g + v(5));
}

TEST_CASE("exact square root") {
    const Polynomial g = k(2) * v(0) - k(4) * v(2) + v(5);
    const auto r = exact_square_root(Rational(-3) * g * g);
    REQUIRE(r.has_value());
    CHECK(r->kappa * r->root * r->root == Rational(-3) * g * g);
    CHECK(r->root.has_integer_coefficients());
    CHECK_FALSE(exact_square_root(g * g + v(1) * v(1)).has_value());
    CHECK_FALSE(exact_square_root(v(0) * v(1)).has_value());
}

TEST_CASE("homogeneous interpolation recovers a known polynomial") {
    const Polynomial target = (v(0) - v(1) + k(2) * v(3)).pow(2) * (v(2) + k(7) * v(5)) - k(3) * v(4).pow(3);
    const Polynomial got = interpolate_homogeneous(3, [&](const std::array<long long, kNumVars>& x) {
        return numerator(target.evaluate(x));
    });
    CHECK(got == target);

    // a non-homogeneous source is caught by the off-lattice checks
    const Polynomial bad = v(0) * v(0) * v(0) + k(1);
    CHECK_THROWS_AS(interpolate_homogeneous(3, [&](const std::array<long long, kNumVars>& x) {
                        return numerator(bad.evaluate(x));
                    }),
                    std::logic_error);
}

TEST_CASE("bareiss determinant matches cofactor expansion") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> d(-20, 20);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 6;
        std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
        for (auto& row : m)
            for (auto& x : row) x = d(rng);
        if (trial % 7 == 3) m[n - 1] = m[0]; // singular
        CHECK(bareiss_determinant(m) == laplace(m));
    }
    std::vector<std::vector<BigInt>> z{{0, 1}, {1, 0}};
    CHECK(bareiss_determinant(z) == -1);
}
