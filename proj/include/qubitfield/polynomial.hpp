#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qubitfield {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kNumVars = 6;

/// Exponent tuple over (l0, ..., l5). Compared lexicographically, so the map
/// order is lex order with l0 > l1 > ... > l5.
using Exponent = std::array<std::uint8_t, kNumVars>;

int total_degree(const Exponent& e);

/// Sparse polynomial with exact rational coefficients in six variables.
class Polynomial {
public:
    using Terms = std::map<Exponent, Rational, std::greater<>>;

    Polynomial() = default;
    static Polynomial constant(const Rational& c);
    static Polynomial variable(int i);
    /// sum_i coeffs[i] * l_i
    static Polynomial linear(const std::array<Rational, kNumVars>& coeffs);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coefficient(const Exponent& e) const;
    void add_term(const Exponent& e, const Rational& c);

    /// Largest total degree; -1 for the zero polynomial.
    int degree() const;
    bool is_homogeneous(int deg) const;
    bool has_integer_coefficients() const;

    /// Lex-leading term. Requires a nonzero polynomial.
    std::pair<Exponent, Rational> leading_term() const;

    Rational evaluate(const std::array<Rational, kNumVars>& x) const;
    Rational evaluate(const std::array<long long, kNumVars>& x) const;
    double evaluate(const std::array<double, kNumVars>& x) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& s);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

    bool operator==(const Polynomial& o) const = default;

    Polynomial pow(int k) const;

    /// Human-readable form, e.g. "l0^2 - 2*l0*l1 + 8*l5^2".
    std::string to_string() const;

private:
    Terms terms_;
};

struct DivisionResult {
    Polynomial quotient;
    Polynomial remainder;
};

/// Multivariate division by a single divisor in lex order. The remainder is
/// zero iff the divisor divides the dividend.
DivisionResult divide(const Polynomial& dividend, const Polynomial& divisor);

struct SquareRoot {
    Rational kappa;   ///< p = kappa * root^2
    Polynomial root;  ///< primitive integer polynomial
};

/// Writes p as kappa * g^2 with g primitive with integer coefficients, or
/// returns nullopt if p is not a constant multiple of a square.
std::optional<SquareRoot> exact_square_root(const Polynomial& p);

/// Recovers a homogeneous polynomial of the given degree from its values on
/// the integer simplex {b >= 0, sum b = degree}. Throws std::logic_error if
/// the interpolant disagrees with `eval` on a set of off-lattice check points
/// or has non-integer coefficients.
Polynomial interpolate_homogeneous(int degree,
                                   const std::function<BigInt(const std::array<long long, kNumVars>&)>& eval);

/// Fraction-free Gaussian elimination; exact for integer matrices.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m);

} // namespace qubitfield
