#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace qubitfield {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

/// An ordered triple of operators indexed by the internal qubit index j = 1..3
/// (stored 0-based).
using OperatorTriple = std::array<Matrix, 3>;

/// Tolerance used by algebra checks unless the caller asks for another one.
inline constexpr double kDefaultAlgebraTol = 1e-10;

/// Levi-Civita symbol with eps(0,1,2) = +1 (0-based indices).
constexpr int levi_civita(int j, int k, int l) {
    if (j == k || k == l || j == l) return 0;
    // even permutations of (0,1,2)
    if ((j == 0 && k == 1) || (j == 1 && k == 2) || (j == 2 && k == 0)) return 1;
    return -1;
}

/// Pauli matrix sigma_j for j in {1,2,3}.
Matrix2 pauli(int j);

Matrix identity(std::size_t n);

/// Kronecker product; (A (x) B)[(i*rb + k), (j*cb + l)] = A[i,j] B[k,l].
Matrix kron(const Matrix& a, const Matrix& b);

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& a, double tol = 1e-12);

/// Frobenius norm.
double frob(const Matrix& a);

double triple_norm(const OperatorTriple& t);

OperatorTriple operator+(const OperatorTriple& a, const OperatorTriple& b);
OperatorTriple operator-(const OperatorTriple& a, const OperatorTriple& b);
OperatorTriple operator*(Complex s, const OperatorTriple& a);
OperatorTriple operator*(double s, const OperatorTriple& a);
OperatorTriple& operator+=(OperatorTriple& a, const OperatorTriple& b);

/// Three N x N Hermitian matrices obeying q_j q_k = delta_jk + i eps_jkl q_l.
///
/// Construction checks the algebra; use QubitTriple::unchecked for fixtures
/// that are deliberately broken (verify_triple reports the failure).
class QubitTriple {
public:
    explicit QubitTriple(OperatorTriple q, double tol = kDefaultAlgebraTol);

    static QubitTriple unchecked(OperatorTriple q);

    std::size_t dim() const { return static_cast<std::size_t>(q_[0].rows()); }
    const Matrix& operator[](std::size_t j) const { return q_[j]; }
    const OperatorTriple& ops() const { return q_; }

    /// Conjugation q_j -> U^dagger q_j U.
    QubitTriple conjugated(const Matrix& u) const;

private:
    QubitTriple() = default;
    OperatorTriple q_;
};

/// q_j = sigma_j (x) 1_{N/2}. Throws std::invalid_argument for odd or
/// nonpositive N.
QubitTriple embed_triple(std::size_t n);

enum class TripleStatus { ok, non_hermitian, algebra_violation };

struct TripleCheck {
    double residual = 0.0;        ///< max_{j,k} ||q_j q_k - delta - i eps q_l||_F
    double hermitian_defect = 0.0; ///< max_j ||q_j - q_j^dagger||_F
    TripleStatus status = TripleStatus::ok;
    bool pass() const { return status == TripleStatus::ok; }
};

TripleCheck verify_triple(const OperatorTriple& q, double tol = kDefaultAlgebraTol);
inline TripleCheck verify_triple(const QubitTriple& t, double tol = kDefaultAlgebraTol) {
    return verify_triple(t.ops(), tol);
}

/// Unitary B with q_j = B (sigma_j (x) 1) B^dagger. Built from an orthonormal
/// basis e_a of the +1 eigenspace of q_3, completed by q_1 e_a.
class ProductFrame {
public:
    explicit ProductFrame(const QubitTriple& t);

    const Matrix& basis() const { return b_; }
    std::size_t dim() const { return static_cast<std::size_t>(b_.rows()); }

    /// B^dagger A B: A expressed in the sigma (x) 1 frame.
    Matrix to_product(const Matrix& a) const;
    Matrix from_product(const Matrix& a) const;

private:
    Matrix b_;
};

/// A = 1 (x) A0 + sigma_j (x) A_j in the triple's product frame.
struct ProductDecomposition {
    Matrix a0;
    std::array<Matrix, 3> a;

    Matrix reconstruct() const; ///< in the product frame
};

ProductDecomposition decompose(const ProductFrame& frame, const Matrix& a);

/// Trace over the (N/2)-dimensional cofactor in the triple's product frame;
/// Tr(A (sigma_a (x) 1)) = Tr(m sigma_a).
Matrix2 partial_trace_rest(const ProductFrame& frame, const Matrix& a);
Matrix2 partial_trace_rest(const QubitTriple& t, const Matrix& a);

} // namespace qubitfield
