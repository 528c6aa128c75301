#pragma once

#include "qubitfield/operator_core.hpp"
#include "qubitfield/random_ops.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qubitfield {

inline constexpr int kNumOmega = 6;

/// Real coefficients lambda_alpha of an element sum_alpha lambda_alpha Omega^(alpha).
struct SuperOpCoeffs {
    std::array<double, kNumOmega> v{};

    double operator[](std::size_t a) const { return v[a]; }
    double& operator[](std::size_t a) { return v[a]; }
    double norm() const;
    bool is_zero() const { return norm() == 0.0; }
    static SuperOpCoeffs unit(int alpha);
};

/// Projector onto the commutant of the local qubit: (A + q_j A q_j) / 4.
Matrix project_commutant(const QubitTriple& t, const Matrix& a);

/// Omega^(alpha) applied to an operator triple (sandwich products).
///   0: A_j
///   1: q_k A_j q_k
///   2: eps_jkl (q_k A_l + A_l q_k)
///   3: i eps_jkl (q_k A_l - A_l q_k)
///   4: q_k A_k q_j + q_j A_k q_k
///   5: i (q_k A_k q_j - q_j A_k q_k)
OperatorTriple omega_apply(int alpha, const QubitTriple& t, const OperatorTriple& a);

OperatorTriple omega_combination(const SuperOpCoeffs& lambda, const QubitTriple& t,
                                 const OperatorTriple& a);

/// Omega^(alpha) q_j = coeff * q_j; `proportional` false when the result is not
/// a multiple of the triple itself.
struct QTripleTable {
    std::array<double, kNumOmega> coeff{};
    std::array<bool, kNumOmega> proportional{};
    std::array<double, kNumOmega> defect{}; ///< ||Omega q - coeff q|| / ||q||
};

QTripleTable omega_on_qtriple_table(const QubitTriple& t, double tol = kDefaultAlgebraTol);

/// Eigen-coefficients of the six maps on the triple itself.
inline constexpr std::array<double, kNumOmega> kOmegaOnTriple{1.0, -1.0, 0.0, -4.0, 6.0, 0.0};

// ---------------------------------------------------------------------------
// Explicit super-operator matrices.
//
// A triple (A_1, A_2, A_3) of N x N operators is vectorized column-major and
// stacked, giving a vector of length 3 N^2. vec(X A Y) = (Y^T (x) X) vec(A),
// which lets every Omega be assembled from Kronecker products without calling
// omega_apply.

Eigen::VectorXcd vectorize(const OperatorTriple& a);
OperatorTriple unvectorize(const Eigen::VectorXcd& v, std::size_t n);

class TripleMap {
public:
    TripleMap(Matrix m, std::size_t n);

    std::size_t dim() const { return n_; }
    const Matrix& matrix() const { return m_; }
    OperatorTriple apply(const OperatorTriple& a) const;

    /// (this o other)(A) = this(other(A)).
    TripleMap after(const TripleMap& other) const;

private:
    Matrix m_;
    std::size_t n_;
};

TripleMap omega_matrix(int alpha, const QubitTriple& t);

/// Least-squares expansion of `target` in the span of `basis` (real
/// coefficients); residual is the max-entry misfit.
struct Expansion {
    std::array<double, kNumOmega> coeff{};
    double residual = 0.0;
};
Expansion expand_in_basis(const std::array<TripleMap, kNumOmega>& basis, const TripleMap& target);

/// Singular values (descending) of the 6-column matrix whose columns are the
/// flattened Omega maps; the maps are independent iff the last is nonzero.
std::vector<double> omega_singular_values(const QubitTriple& t);

// ---------------------------------------------------------------------------

/// c^{ab}_g with Omega^(a) Omega^(b) = c^{ab}_g Omega^(g), where the product
/// means "apply Omega^(b) first".
class StructureConstants {
public:
    StructureConstants() = default;
    explicit StructureConstants(const std::array<int, 216>& c) : c_(c) {}

    int operator()(int a, int b, int g) const { return c_[idx(a, b, g)]; }
    int& operator()(int a, int b, int g) { return c_[idx(a, b, g)]; }
    const std::array<int, 216>& raw() const { return c_; }

    /// Omega^(0) is a two-sided unit.
    bool has_unit() const;
    /// Number of (a,b,g,e) index combinations violating associativity (exact).
    int associativity_violations() const;

    /// c'^{ab}_g = c^{ba}_g
    StructureConstants swapped() const;

    /// Coefficients of (lambda . Omega) o (mu . Omega).
    SuperOpCoeffs compose(const SuperOpCoeffs& lambda, const SuperOpCoeffs& mu) const;

    /// M_{bg} = lambda_a c^{ab}_g
    Eigen::MatrixXd left_multiplication(const SuperOpCoeffs& lambda) const;

    bool operator==(const StructureConstants&) const = default;

private:
    static constexpr int idx(int a, int b, int g) { return (a * 6 + b) * 6 + g; }
    std::array<int, 216> c_{};
};

struct ExtractionResult {
    StructureConstants c;
    double max_residual = 0.0;       ///< expansion misfit over all 36 products
    double max_rounding = 0.0;       ///< largest distance to the nearest integer
    double min_singular_ratio = 0.0; ///< sigma_min / sigma_max of the design matrix
};

/// Expands every product Omega^(a) Omega^(b) in the Omega basis by a least
/// squares fit over `samples` random Hermitian triples. Throws
/// std::runtime_error when the maps are dependent at this dimension, when the
/// fit residual exceeds 1e-9 or when a coefficient is more than 1e-6 away
/// from an integer.
ExtractionResult extract_structure_constants(const QubitTriple& t, Rng& rng, int samples = 40);

// ---------------------------------------------------------------------------
// Published composition table and order detection.

/// Cell (row, col) of the printed composition table: the entry found in row
/// `row` (the second factor) and column `col` (the first factor), as a
/// coefficient vector over Omega^(0..5).
using CompositionTable = std::array<std::array<std::array<int, kNumOmega>, kNumOmega>, kNumOmega>;
const CompositionTable& printed_composition_table();

enum class CompositionOrder {
    column_after_row, ///< cell(row b, col a) = Omega^(a) o Omega^(b)
    row_after_column  ///< cell(row b, col a) = Omega^(b) o Omega^(a)
};

std::string to_string(CompositionOrder o);

struct TableComparison {
    CompositionOrder detected = CompositionOrder::column_after_row;
    int agree_column_after_row = 0;
    int agree_row_after_column = 0;
    /// verdict per cell under the detected order, indexed [row][col]
    std::array<std::array<bool, kNumOmega>, kNumOmega> cell_agrees{};
    /// computed coefficients per cell under the detected order
    CompositionTable computed{};
    double max_residual = 0.0;
    int agree() const;
};

/// Composes the explicit TripleMap matrices in both orders and matches the
/// resulting integer expansions against the printed table.
TableComparison compare_with_printed_table(const QubitTriple& t);

/// Structure constants laid out so that c(a, b, .) is the table cell in
/// column a, row b under the detected order.
StructureConstants constants_in_table_order(const StructureConstants& operator_product,
                                            CompositionOrder order);

// ---------------------------------------------------------------------------

struct InverseResult {
    std::optional<SuperOpCoeffs> inverse;
    int rank = 0;
    double residual = 0.0;
    bool singular() const { return !inverse.has_value(); }
};

/// Solves lambda_a inv_b c^{ab}_g = delta_g0.
InverseResult monoid_inverse(const SuperOpCoeffs& lambda, const StructureConstants& c);

// ---------------------------------------------------------------------------
// Swap super-operator on C^2 (x) C^2.

/// The swap matrix (1 (x) 1 + sigma_j (x) sigma_j) / 2.
Matrix swap_matrix();

/// W^phi = ((3 + e^{i pi phi}) 1 + (1 - e^{i pi phi}) sigma_j (x) sigma_j) / 4.
Matrix swap_power(double phi);

/// A -> W^{-phi} A W^{phi}.
Matrix swap_conjugate(double phi, const Matrix& a);

/// Projector onto the antisymmetric (singlet) subspace, (1 - W) / 2.
Matrix singlet_projector();

} // namespace qubitfield
