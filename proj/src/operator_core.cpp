#include "qubitfield/operator_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <string>

namespace qubitfield {

Matrix2 pauli(int j) {
    const Complex i{0.0, 1.0};
    Matrix2 s;
    switch (j) {
    case 1: s << 0.0, 1.0, 1.0, 0.0; break;
    case 2: s << 0.0, -i, i, 0.0; break;
    case 3: s << 1.0, 0.0, 0.0, -1.0; break;
    default: throw std::out_of_range("pauli: index must be 1, 2 or 3, got " + std::to_string(j));
    }
    return s;
}

Matrix identity(std::size_t n) {
    return Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    const auto rb = b.rows();
    const auto cb = b.cols();
    Matrix out(a.rows() * rb, a.cols() * cb);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

namespace {
void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}
} // namespace

Matrix commutator(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "commutator");
    return a * b - b * a;
}

Matrix anticommutator(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "anticommutator");
    return a * b + b * a;
}

bool is_hermitian(const Matrix& a, double tol) {
    return a.rows() == a.cols() && (a - a.adjoint()).norm() <= tol;
}

double frob(const Matrix& a) { return a.norm(); }

double triple_norm(const OperatorTriple& t) {
    return std::sqrt(t[0].squaredNorm() + t[1].squaredNorm() + t[2].squaredNorm());
}

OperatorTriple operator+(const OperatorTriple& a, const OperatorTriple& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
OperatorTriple operator-(const OperatorTriple& a, const OperatorTriple& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
OperatorTriple operator*(Complex s, const OperatorTriple& a) {
    return {s * a[0], s * a[1], s * a[2]};
}
OperatorTriple operator*(double s, const OperatorTriple& a) {
    return {s * a[0], s * a[1], s * a[2]};
}
OperatorTriple& operator+=(OperatorTriple& a, const OperatorTriple& b) {
    for (int j = 0; j < 3; ++j) a[j] += b[j];
    return a;
}

// ---------------------------------------------------------------------------

TripleCheck verify_triple(const OperatorTriple& q, double tol) {
    TripleCheck check;
    const auto n = q[0].rows();
    for (const auto& m : q) {
        if (m.rows() != n || m.cols() != n)
            throw std::invalid_argument("verify_triple: components differ in shape");
        check.hermitian_defect = std::max(check.hermitian_defect, (m - m.adjoint()).norm());
    }
    const Complex i{0.0, 1.0};
    const Matrix one = Matrix::Identity(n, n);
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            Matrix r = q[j] * q[k];
            if (j == k) r -= one;
            for (int l = 0; l < 3; ++l)
                if (const int e = levi_civita(j, k, l)) r -= (i * double(e)) * q[l];
            check.residual = std::max(check.residual, r.norm());
        }
    }
    if (check.hermitian_defect > tol)
        check.status = TripleStatus::non_hermitian;
    else if (check.residual > tol)
        check.status = TripleStatus::algebra_violation;
    return check;
}

QubitTriple::QubitTriple(OperatorTriple q, double tol) : q_(std::move(q)) {
    const auto n = q_[0].rows();
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("QubitTriple: dimension must be even and positive");
    const auto check = verify_triple(q_, tol);
    if (check.status == TripleStatus::non_hermitian)
        throw std::invalid_argument("QubitTriple: component is not Hermitian (defect " +
                                    std::to_string(check.hermitian_defect) + ")");
    if (check.status == TripleStatus::algebra_violation)
        throw std::invalid_argument("QubitTriple: Pauli algebra residual " +
                                    std::to_string(check.residual));
}

QubitTriple QubitTriple::unchecked(OperatorTriple q) {
    QubitTriple t;
    t.q_ = std::move(q);
    return t;
}

QubitTriple QubitTriple::conjugated(const Matrix& u) const {
    OperatorTriple out;
    for (int j = 0; j < 3; ++j) out[j] = u.adjoint() * q_[j] * u;
    return unchecked(std::move(out));
}

QubitTriple embed_triple(std::size_t n) {
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("embed_triple: N must be even and positive, got " +
                                    std::to_string(n));
    const Matrix rest = identity(n / 2);
    OperatorTriple q;
    for (int j = 0; j < 3; ++j) q[j] = kron(Matrix(pauli(j + 1)), rest);
    return QubitTriple::unchecked(std::move(q));
}

// ---------------------------------------------------------------------------

ProductFrame::ProductFrame(const QubitTriple& t) {
    const auto n = static_cast<Eigen::Index>(t.dim());
    const auto half = n / 2;
    Eigen::SelfAdjointEigenSolver<Matrix> es(t[2]);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("ProductFrame: eigen-decomposition of q3 failed");
    // eigenvalues ascending: the upper half spans the +1 eigenspace
    const Matrix plus = es.eigenvectors().rightCols(half);
    b_.resize(n, n);
    b_.leftCols(half) = plus;
    b_.rightCols(half) = t[0] * plus;
}

Matrix ProductFrame::to_product(const Matrix& a) const { return b_.adjoint() * a * b_; }
Matrix ProductFrame::from_product(const Matrix& a) const { return b_ * a * b_.adjoint(); }

Matrix ProductDecomposition::reconstruct() const {
    Matrix out = kron(Matrix(Matrix2::Identity()), a0);
    for (int j = 0; j < 3; ++j) out += kron(Matrix(pauli(j + 1)), a[j]);
    return out;
}

ProductDecomposition decompose(const ProductFrame& frame, const Matrix& a) {
    if (a.rows() != static_cast<Eigen::Index>(frame.dim()) || a.cols() != a.rows())
        throw std::invalid_argument("decompose: dimension mismatch");
    const Matrix p = frame.to_product(a);
    const auto h = p.rows() / 2;
    const Matrix a00 = p.topLeftCorner(h, h);
    const Matrix a01 = p.topRightCorner(h, h);
    const Matrix a10 = p.bottomLeftCorner(h, h);
    const Matrix a11 = p.bottomRightCorner(h, h);
    const Complex i{0.0, 1.0};
    ProductDecomposition d;
    d.a0 = 0.5 * (a00 + a11);
    d.a[0] = 0.5 * (a01 + a10);
    d.a[1] = (0.5 * i) * (a01 - a10);
    d.a[2] = 0.5 * (a00 - a11);
    return d;
}

Matrix2 partial_trace_rest(const ProductFrame& frame, const Matrix& a) {
    if (a.rows() != static_cast<Eigen::Index>(frame.dim()) || a.cols() != a.rows())
        throw std::invalid_argument("partial_trace_rest: dimension mismatch");
    const Matrix p = frame.to_product(a);
    const auto h = p.rows() / 2;
    Matrix2 m;
    m(0, 0) = p.block(0, 0, h, h).trace();
    m(0, 1) = p.block(0, h, h, h).trace();
    m(1, 0) = p.block(h, 0, h, h).trace();
    m(1, 1) = p.block(h, h, h, h).trace();
    return m;
}

Matrix2 partial_trace_rest(const QubitTriple& t, const Matrix& a) {
    return partial_trace_rest(ProductFrame(t), a);
}

} // namespace qubitfield
