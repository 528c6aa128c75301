#include "qubitfield/eom_classifier.hpp"

#include <doctest.h>

#include <Eigen/LU>

#include <cmath>

using namespace qubitfield;

namespace {

Polynomial v(int i) { return Polynomial::variable(i); }
Polynomial k(long long c) { return Polynomial::constant(Rational(c)); }

const StructureConstants& constants() {
    static const StructureConstants c = [] {
        Rng rng(0);
        return extract_structure_constants(embed_triple(4).conjugated(random_unitary(4, rng)), rng).c;
    }();
    return c;
}

const Polynomial& det() {
    static const Polynomial d = determinant_polynomial(constants());
    return d;
}

// Third factor computed once by hand from the determinant and frozen here.
Polynomial frozen_g() {
    return -v(0) * v(0) - k(2) * v(0) * v(1) + k(2) * v(0) * v(3) + k(2) * v(0) * v(4) + k(3) * v(1) * v(1) +
           k(6) * v(1) * v(3) + k(14) * v(1) * v(4) - k(8) * v(2) * v(2) + k(4) * v(3) * v(4) + k(8) * v(4) * v(4) +
           k(8) * v(5) * v(5);
}

SuperOpCoeffs coeffs(std::array<double, 6> x) {
    SuperOpCoeffs c;
    c.v = x;
    return c;
}

} // namespace

TEST_CASE("labels") {
    CHECK(type_from_pattern(false, false, false) == EomTypeLabel::I);
    CHECK(type_from_pattern(true, false, false) == EomTypeLabel::II);
    CHECK(type_from_pattern(false, true, false) == EomTypeLabel::III);
    CHECK(type_from_pattern(false, false, true) == EomTypeLabel::IV);
    CHECK(type_from_pattern(false, true, true) == EomTypeLabel::V);
    CHECK(type_from_pattern(true, false, true) == EomTypeLabel::VI);
    CHECK(type_from_pattern(true, true, false) == EomTypeLabel::VII);
    CHECK(type_from_pattern(true, true, true) == EomTypeLabel::VIII);
    for (int t = 1; t <= 8; ++t) {
        const auto label = static_cast<EomTypeLabel>(t);
        CHECK(parse_eom_type(to_string(label)) == label);
    }
    CHECK_THROWS(parse_eom_type("IX"));
    CHECK_THROWS_AS(EomSpec(SuperOpCoeffs{}, 1.0), std::invalid_argument);
}

TEST_CASE("determinant polynomial") {
    const Polynomial& d = det();
    CHECK(d.is_homogeneous(6));
    CHECK(d.has_integer_coefficients());
    CHECK(d.size() == 166);
    const Polynomial f1 = v(0) - v(1) + k(2) * v(3);
    const Polynomial f2 = v(0) - v(1) - k(4) * v(3) + k(6) * v(4);
    const Polynomial g = frozen_g();
    CHECK(d == f1 * f2 * g * g);

    SUBCASE("agrees with a floating determinant") {
        Rng rng(17);
        std::normal_distribution<double> n;
        for (int trial = 0; trial < 50; ++trial) {
            std::array<double, 6> x{};
            for (auto& c : x) c = n(rng);
            const double numeric = constants().left_multiplication(coeffs(x)).determinant();
            CHECK(d.evaluate(x) == doctest::Approx(numeric).epsilon(1e-9));
        }
    }

    SUBCASE("agrees with an exact determinant") {
        const std::array<long long, 6> l{3, -1, 2, 5, -4, 1};
        CHECK(d.evaluate(l) == Rational(bareiss_determinant(integer_left_multiplication(constants(), l))));
    }
}

TEST_CASE("factorization against the printed form") {
    const Factorization f = factorize(det());
    CHECK(f.f1_divides);
    CHECK(f.f2_divides);
    CHECK(f.f1_remainder.is_zero());
    CHECK(f.constant == Rational(1));
    CHECK(f.g == frozen_g());
    CHECK(f.f1 == printed_factor1());
    CHECK(f.f2 == printed_factor2());
    CHECK_FALSE(f.third_factor_matches_printed());
    REQUIRE(f.third_factor_diff.size() == 2);
    // the printed quadratic carries 8 l3^2 where the determinant needs 8 l5^2
    CHECK(f.g - printed_factor3() == k(8) * v(5) * v(5) - k(8) * v(3) * v(3));

    // a linear factor that does not divide is reported, not thrown
    const Factorization bad = factorize(frozen_g().pow(2) * (v(2) + v(3)).pow(2));
    CHECK_FALSE(bad.f1_divides);
    CHECK_FALSE(bad.f2_divides);
    CHECK_THROWS_AS(factorize(det() + v(2).pow(6)), std::logic_error);
}

TEST_CASE("classification") {
    const Factorization f = factorize(det());
    const auto type_of = [&](std::array<double, 6> l, double mu = 0.0) { return classify(EomSpec(coeffs(l), mu), f); };

    const EomType box = type_of({1, 0, 0, 0, 0, 0}, 2.0);
    CHECK(box.type == EomTypeLabel::I);
    CHECK(box.invertible);
    CHECK_FALSE(box.massless);
    CHECK(type_of({1, 0, 0, 0, 0, 0}).massless);

    // Omega2: f1 = f2 = 0, g = -8
    const EomType o2 = type_of({0, 0, 1, 0, 0, 0});
    CHECK(o2.type == EomTypeLabel::VII);
    CHECK(o2.factors.f[2] == doctest::Approx(-8.0));
    CHECK_FALSE(o2.invertible);

    // 1 + Omega1: every factor vanishes
    CHECK(type_of({1, 1, 0, 0, 0, 0}).type == EomTypeLabel::VIII);
    // 2 - Omega1: f1 = f2 = 3, g = -4 + 4 + 3 = 3
    CHECK(type_of({2, -1, 0, 0, 0, 0}).type == EomTypeLabel::I);

    const EomType o25 = type_of({0, 0, 1, 0, 0, 1});
    CHECK(o25.type == EomTypeLabel::VIII);
    CHECK(o25.printed_type == EomTypeLabel::VII);
    CHECK(o25.conflict);

    // the zero threshold scales with the size of lambda
    CHECK(type_of({0, 0, 1e6, 0, 0, 1e6}).type == EomTypeLabel::VIII);
    CHECK(type_of({0, 0, 1e-6, 0, 0, 1e-6}).type == EomTypeLabel::VIII);
}

TEST_CASE("labelled operators") {
    const Factorization f = factorize(det());
    const auto rows = table2_crosscheck(f);
    CHECK(rows.size() == 12);
    for (const auto& r : rows) {
        CAPTURE(r.label);
        CHECK(r.agree);
        CHECK(r.verdict.type == r.printed_label);
    }
}

TEST_CASE("reduction to the Klein-Gordon form") {
    const StructureConstants& c = constants();
    const auto red = equivalent_type1_reduction(EomSpec(SuperOpCoeffs::unit(1), 1.0), c);
    REQUIRE(red.has_value());
    // Omega1 box q = -box q on solutions, so box q = q
    CHECK(red->mu == doctest::Approx(-1.0));
    CHECK(red->lambda[0] == 1.0);
    CHECK(equivalent_type1_reduction(EomSpec(SuperOpCoeffs::unit(0), 2.5), c)->mu == doctest::Approx(2.5));
    CHECK_FALSE(equivalent_type1_reduction(EomSpec(SuperOpCoeffs::unit(2), 1.0), c).has_value());
    const auto massless = equivalent_type1_reduction(EomSpec(SuperOpCoeffs::unit(1), 0.0), c);
    REQUIRE(massless.has_value());
    CHECK_FALSE(std::signbit(massless->mu));
}
