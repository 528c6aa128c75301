#pragma once

#include "qubitfield/polynomial.hpp"
#include "qubitfield/superop_algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qubitfield {

/// lambda_a Omega^(a) box q_j + mu q_j = 0
struct EomSpec {
    SuperOpCoeffs lambda;
    double mu = 0.0;

    /// Throws std::invalid_argument for lambda = 0.
    EomSpec(SuperOpCoeffs l, double m);
};

enum class EomTypeLabel { I = 1, II, III, IV, V, VI, VII, VIII };

std::string to_string(EomTypeLabel t);
/// Parses "I" .. "VIII".
EomTypeLabel parse_eom_type(const std::string& s);

/// Vanishing pattern -> label:
///   none -> I; only f1 -> II; only f2 -> III; only f3 -> IV;
///   f2,f3 -> V; f1,f3 -> VI; f1,f2 -> VII; all -> VIII.
EomTypeLabel type_from_pattern(bool z1, bool z2, bool z3);

/// det(M) with M_bg = lambda_a c^{ab}_g, reconstructed by exact interpolation.
Polynomial determinant_polynomial(const StructureConstants& c);

/// M_bg = lambda_a c^{ab}_g for integer lambda.
std::vector<std::vector<BigInt>> integer_left_multiplication(const StructureConstants& c,
                                                             const std::array<long long, kNumOmega>& lambda);

/// The factorization printed in the literature for this monoid:
/// (l0 - l1 + 2 l3)(l0 - l1 - 4 l3 + 6 l4)(P3)^2.
Polynomial printed_factor1();
Polynomial printed_factor2();
Polynomial printed_factor3();

struct TermDiff {
    Exponent exponent;
    Rational printed;
    Rational oracle;
};

struct Factorization {
    Polynomial f1, f2;      ///< linear factors
    Polynomial g;           ///< quadratic, sign fixed so the l0^2 coefficient matches the printed factor
    Rational constant;      ///< det = constant * f1 * f2 * g^2
    bool f1_divides = false;
    bool f2_divides = false;
    Polynomial f1_remainder;
    Polynomial f2_remainder;
    std::vector<TermDiff> third_factor_diff; ///< monomials where g and the printed factor differ

    bool third_factor_matches_printed() const { return third_factor_diff.empty(); }
};

/// Divides out the two printed linear factors and takes the exact square root
/// of the remaining quartic. A printed linear factor that does not divide is
/// reported in the result; a quartic that is not a perfect square throws
/// std::logic_error.
Factorization factorize(const Polynomial& det);

struct FactorValues {
    std::array<double, 3> f{}; ///< f1, f2, g (or the printed P3)
    std::array<bool, 3> zero{};
};

struct EomType {
    EomTypeLabel type = EomTypeLabel::I;
    bool massless = false;
    FactorValues factors;          ///< oracle factors
    bool invertible = false;
    EomTypeLabel printed_type = EomTypeLabel::I; ///< from the printed factorization
    FactorValues printed_factors;
    bool conflict = false;         ///< oracle and printed verdicts differ
};

/// Zero threshold is 1e-9 * ||lambda||^deg for each factor of degree deg.
EomType classify(const EomSpec& spec, const Factorization& f);

struct Table2Row {
    std::string label;
    SuperOpCoeffs lambda;
    EomTypeLabel printed_label;
    EomType verdict;
    bool agree = false;
};

/// Classifies every operator that appears in the table of Lagrangian-derived
/// equations of motion, plus the family members at their special parameters
/// and one generic parameter value, and the type claimed for the
/// Omega^(2) + Omega^(5) equation.
std::vector<Table2Row> table2_crosscheck(const Factorization& f);

/// If lambda is invertible in the monoid, the equation is equivalent to
/// (box + mu') q = 0 with mu' = mu * sum_a inv_a w_a, where w_a is the
/// eigenvalue of Omega^(a) on the triple itself. Otherwise nullopt.
std::optional<EomSpec> equivalent_type1_reduction(const EomSpec& spec, const StructureConstants& c);

} // namespace qubitfield
