#include "qubitfield/superop_algebra.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qubitfield {

namespace {

const Complex kI{0.0, 1.0};

void require_alpha(int alpha) {
    if (alpha < 0 || alpha >= kNumOmega)
        throw std::out_of_range("super-operator index must be in 0..5, got " + std::to_string(alpha));
}

void require_dims(const QubitTriple& t, const OperatorTriple& a) {
    const auto n = static_cast<Eigen::Index>(t.dim());
    for (const auto& m : a)
        if (m.rows() != n || m.cols() != n)
            throw std::invalid_argument("super-operator: operand dimension does not match the triple");
}

} // namespace

double SuperOpCoeffs::norm() const {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

SuperOpCoeffs SuperOpCoeffs::unit(int alpha) {
    require_alpha(alpha);
    SuperOpCoeffs c;
    c.v[alpha] = 1.0;
    return c;
}

Matrix project_commutant(const QubitTriple& t, const Matrix& a) {
    if (a.rows() != static_cast<Eigen::Index>(t.dim()) || a.cols() != a.rows())
        throw std::invalid_argument("project_commutant: dimension mismatch");
    Matrix out = a;
    for (int j = 0; j < 3; ++j) out += t[j] * a * t[j];
    return 0.25 * out;
}

OperatorTriple omega_apply(int alpha, const QubitTriple& t, const OperatorTriple& a) {
    require_alpha(alpha);
    require_dims(t, a);
    OperatorTriple out;
    switch (alpha) {
    case 0:
        out = a;
        break;
    case 1:
        for (int j = 0; j < 3; ++j) {
            out[j] = t[0] * a[j] * t[0];
            out[j] += t[1] * a[j] * t[1];
            out[j] += t[2] * a[j] * t[2];
        }
        break;
    case 2:
    case 3: {
        // eps_jkl with (k,l) the two cyclic successors of j
        for (int j = 0; j < 3; ++j) {
            const int k = (j + 1) % 3;
            const int l = (j + 2) % 3;
            if (alpha == 2)
                out[j] = t[k] * a[l] + a[l] * t[k] - t[l] * a[k] - a[k] * t[l];
            else
                out[j] = kI * (t[k] * a[l] - a[l] * t[k] - t[l] * a[k] + a[k] * t[l]);
        }
        break;
    }
    case 4:
    case 5: {
        Matrix left = t[0] * a[0] + t[1] * a[1] + t[2] * a[2];
        Matrix right = a[0] * t[0] + a[1] * t[1] + a[2] * t[2];
        for (int j = 0; j < 3; ++j) {
            if (alpha == 4)
                out[j] = left * t[j] + t[j] * right;
            else
                out[j] = kI * (left * t[j] - t[j] * right);
        }
        break;
    }
    }
    return out;
}

OperatorTriple omega_combination(const SuperOpCoeffs& lambda, const QubitTriple& t,
                                 const OperatorTriple& a) {
    const auto n = static_cast<Eigen::Index>(t.dim());
    OperatorTriple out{Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n)};
    for (int alpha = 0; alpha < kNumOmega; ++alpha) {
        if (lambda[alpha] == 0.0) continue;
        const auto term = omega_apply(alpha, t, a);
        for (int j = 0; j < 3; ++j) out[j] += lambda[alpha] * term[j];
    }
    return out;
}

QTripleTable omega_on_qtriple_table(const QubitTriple& t, double tol) {
    QTripleTable table;
    const OperatorTriple& q = t.ops();
    const double qq = triple_norm(q);
    for (int alpha = 0; alpha < kNumOmega; ++alpha) {
        const auto r = omega_apply(alpha, t, q);
        Complex num = 0.0;
        for (int j = 0; j < 3; ++j) num += (q[j].adjoint() * r[j]).trace();
        const double c = num.real() / (qq * qq);
        const double defect = triple_norm(r - Complex(c) * q) / qq;
        table.coeff[alpha] = c;
        table.defect[alpha] = defect;
        table.proportional[alpha] = defect <= tol;
    }
    return table;
}

// ---------------------------------------------------------------------------

Eigen::VectorXcd vectorize(const OperatorTriple& a) {
    const auto nn = a[0].size();
    Eigen::VectorXcd v(3 * nn);
    for (int j = 0; j < 3; ++j) v.segment(j * nn, nn) = a[j].reshaped();
    return v;
}

OperatorTriple unvectorize(const Eigen::VectorXcd& v, std::size_t n) {
    const auto ni = static_cast<Eigen::Index>(n);
    const auto nn = ni * ni;
    if (v.size() != 3 * nn) throw std::invalid_argument("unvectorize: length mismatch");
    OperatorTriple a;
    for (int j = 0; j < 3; ++j) a[j] = v.segment(j * nn, nn).reshaped(ni, ni);
    return a;
}

TripleMap::TripleMap(Matrix m, std::size_t n) : m_(std::move(m)), n_(n) {
    const auto d = static_cast<Eigen::Index>(3 * n * n);
    if (m_.rows() != d || m_.cols() != d) throw std::invalid_argument("TripleMap: shape mismatch");
}

OperatorTriple TripleMap::apply(const OperatorTriple& a) const {
    return unvectorize(m_ * vectorize(a), n_);
}

TripleMap TripleMap::after(const TripleMap& other) const {
    if (other.n_ != n_) throw std::invalid_argument("TripleMap: composing maps of different N");
    return TripleMap(m_ * other.m_, n_);
}

TripleMap omega_matrix(int alpha, const QubitTriple& t) {
    require_alpha(alpha);
    const auto n = static_cast<Eigen::Index>(t.dim());
    const auto nn = n * n;
    const Matrix one = Matrix::Identity(n, n);
    Matrix m = Matrix::Zero(3 * nn, 3 * nn);
    // left(X) = 1 (x) X is vec(X A); right(X) = X^T (x) 1 is vec(A X)
    auto left = [&](const Matrix& x) { return kron(one, x); };
    auto right = [&](const Matrix& x) { return kron(x.transpose(), one); };
    auto sandwich = [&](const Matrix& x, const Matrix& y) { return kron(y.transpose(), x); };

    for (int j = 0; j < 3; ++j) {
        for (int l = 0; l < 3; ++l) {
            auto blk = m.block(j * nn, l * nn, nn, nn);
            switch (alpha) {
            case 0:
                if (j == l) blk = Matrix::Identity(nn, nn);
                break;
            case 1:
                if (j == l)
                    for (int k = 0; k < 3; ++k) blk += sandwich(t[k], t[k]);
                break;
            case 2:
                for (int k = 0; k < 3; ++k)
                    if (const int e = levi_civita(j, k, l)) blk += double(e) * (left(t[k]) + right(t[k]));
                break;
            case 3:
                for (int k = 0; k < 3; ++k)
                    if (const int e = levi_civita(j, k, l))
                        blk += (kI * double(e)) * (left(t[k]) - right(t[k]));
                break;
            case 4:
                // q_l A_l q_j + q_j A_l q_l
                blk = sandwich(t[l], t[j]) + sandwich(t[j], t[l]);
                break;
            case 5:
                blk = kI * (sandwich(t[l], t[j]) - sandwich(t[j], t[l]));
                break;
            }
        }
    }
    return TripleMap(std::move(m), t.dim());
}

namespace {

// Stack real and imaginary parts so the fit is over real coefficients.
Eigen::MatrixXd realify(const Matrix& m) {
    Eigen::MatrixXd r(2 * m.rows(), m.cols());
    r.topRows(m.rows()) = m.real();
    r.bottomRows(m.rows()) = m.imag();
    return r;
}

Eigen::MatrixXd flattened_basis(const std::array<TripleMap, kNumOmega>& basis) {
    const auto entries = basis[0].matrix().size();
    Matrix cols(entries, kNumOmega);
    for (int g = 0; g < kNumOmega; ++g) cols.col(g) = basis[g].matrix().reshaped();
    return realify(cols);
}

} // namespace

Expansion expand_in_basis(const std::array<TripleMap, kNumOmega>& basis, const TripleMap& target) {
    const Eigen::MatrixXd a = flattened_basis(basis);
    Matrix rhs_c(target.matrix().size(), 1);
    rhs_c.col(0) = target.matrix().reshaped();
    const Eigen::VectorXd rhs = realify(rhs_c).col(0);
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(rhs);
    Expansion e;
    for (int g = 0; g < kNumOmega; ++g) e.coeff[g] = x[g];
    e.residual = (a * x - rhs).cwiseAbs().maxCoeff();
    return e;
}

std::vector<double> omega_singular_values(const QubitTriple& t) {
    std::array<TripleMap, kNumOmega> basis{omega_matrix(0, t), omega_matrix(1, t), omega_matrix(2, t),
                                           omega_matrix(3, t), omega_matrix(4, t), omega_matrix(5, t)};
    const Eigen::MatrixXd a = flattened_basis(basis);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

// ---------------------------------------------------------------------------

bool StructureConstants::has_unit() const {
    for (int b = 0; b < 6; ++b)
        for (int g = 0; g < 6; ++g) {
            const int delta = b == g ? 1 : 0;
            if ((*this)(0, b, g) != delta || (*this)(b, 0, g) != delta) return false;
        }
    return true;
}

int StructureConstants::associativity_violations() const {
    int bad = 0;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            for (int g = 0; g < 6; ++g)
                for (int e = 0; e < 6; ++e) {
                    long lhs = 0, rhs = 0;
                    for (int d = 0; d < 6; ++d) {
                        lhs += long((*this)(a, b, d)) * (*this)(d, g, e);
                        rhs += long((*this)(b, g, d)) * (*this)(a, d, e);
                    }
                    if (lhs != rhs) ++bad;
                }
    return bad;
}

StructureConstants StructureConstants::swapped() const {
    StructureConstants s;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            for (int g = 0; g < 6; ++g) s(a, b, g) = (*this)(b, a, g);
    return s;
}

SuperOpCoeffs StructureConstants::compose(const SuperOpCoeffs& lambda, const SuperOpCoeffs& mu) const {
    SuperOpCoeffs out;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            const double w = lambda[a] * mu[b];
            if (w == 0.0) continue;
            for (int g = 0; g < 6; ++g) out[g] += w * (*this)(a, b, g);
        }
    return out;
}

Eigen::MatrixXd StructureConstants::left_multiplication(const SuperOpCoeffs& lambda) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            for (int g = 0; g < 6; ++g) m(b, g) += lambda[a] * (*this)(a, b, g);
    return m;
}

ExtractionResult extract_structure_constants(const QubitTriple& t, Rng& rng, int samples) {
    if (samples < 1) throw std::invalid_argument("extract_structure_constants: need samples >= 1");
    const std::size_t n = t.dim();
    std::vector<std::array<OperatorTriple, kNumOmega>> images(samples);
    for (int s = 0; s < samples; ++s) {
        const auto x = random_hermitian_triple(n, rng);
        for (int g = 0; g < kNumOmega; ++g) images[s][g] = omega_apply(g, t, x);
    }
    const Eigen::Index per = static_cast<Eigen::Index>(3 * n * n);
    const Eigen::Index rows = per * samples;

    Matrix design(rows, kNumOmega);
    for (int s = 0; s < samples; ++s)
        for (int g = 0; g < kNumOmega; ++g) design.block(s * per, g, per, 1) = vectorize(images[s][g]);
    const Eigen::MatrixXd a = realify(design);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto sv = svd.singularValues();
    ExtractionResult out;
    out.min_singular_ratio = sv[kNumOmega - 1] / sv[0];
    if (out.min_singular_ratio < 1e-10)
        throw std::runtime_error("extract_structure_constants: the six maps are linearly dependent at N = " +
                                 std::to_string(n));

    for (int alpha = 0; alpha < kNumOmega; ++alpha) {
        for (int beta = 0; beta < kNumOmega; ++beta) {
            Matrix rhs_c(rows, 1);
            for (int s = 0; s < samples; ++s)
                rhs_c.block(s * per, 0, per, 1) = vectorize(omega_apply(alpha, t, images[s][beta]));
            const Eigen::VectorXd rhs = realify(rhs_c).col(0);
            const Eigen::VectorXd x = svd.solve(rhs);
            out.max_residual = std::max(out.max_residual, (a * x - rhs).cwiseAbs().maxCoeff());
            for (int g = 0; g < kNumOmega; ++g) {
                const double r = std::round(x[g]);
                out.max_rounding = std::max(out.max_rounding, std::abs(x[g] - r));
                out.c(alpha, beta, g) = static_cast<int>(r);
            }
        }
    }
    if (out.max_residual > 1e-9)
        throw std::runtime_error("extract_structure_constants: products do not close on the basis (residual " +
                                 std::to_string(out.max_residual) + ")");
    if (out.max_rounding > 1e-6)
        throw std::runtime_error("extract_structure_constants: non-integer coefficient (distance " +
                                 std::to_string(out.max_rounding) + ")");
    return out;
}

// ---------------------------------------------------------------------------

const CompositionTable& printed_composition_table() {
    // [row = second factor][col = first factor] -> coefficients over Omega^(0..5)
    static const CompositionTable table = [] {
        CompositionTable t{};
        auto set = [&](int row, int col, std::array<int, 6> v) { t[row][col] = v; };
        for (int k = 0; k < 6; ++k) {
            std::array<int, 6> e{};
            e[k] = 1;
            set(0, k, e);
            set(k, 0, e);
        }
        set(1, 1, {3, 2, 0, 0, 0, 0});
        set(1, 2, {0, 0, 1, 0, 0, -2});
        set(1, 3, {0, 0, 0, -1, 0, 0});
        set(1, 4, {2, 2, 0, 0, -1, 0});
        set(1, 5, {0, 0, -2, 0, 0, 1});

        set(2, 1, {0, 0, 1, 0, 0, 2});
        set(2, 2, {-4, -2, 0, 1, 1, 0});
        set(2, 3, {0, 0, -1, 0, 0, 1});
        set(2, 4, {0, 0, -1, 0, 0, 3});
        set(2, 5, {0, -2, 0, -1, -1, 0});

        set(3, 1, {0, 0, 0, -1, 0, 0});
        set(3, 2, {0, 0, -1, 0, 0, -1});
        set(3, 3, {4, -2, 0, -1, 1, 0});
        set(3, 4, {0, 2, 0, 1, -3, 0});
        set(3, 5, {0, 0, -1, 0, 0, -1});

        set(4, 1, {2, 2, 0, 0, -1, 0});
        set(4, 2, {0, 0, -1, 0, 0, -3});
        set(4, 3, {0, 2, 0, 1, -3, 0});
        set(4, 4, {8, -2, 0, -5, 1, 0});
        set(4, 5, {0, 0, -3, 0, 0, -1});

        set(5, 1, {0, 0, 2, 0, 0, 1});
        set(5, 2, {0, 2, 0, 1, 1, 0});
        set(5, 3, {0, 0, 1, 0, 0, -1});
        set(5, 4, {0, 0, 3, 0, 0, -1});
        set(5, 5, {4, 2, 0, -1, -1, 0});
        return t;
    }();
    return table;
}

std::string to_string(CompositionOrder o) {
    return o == CompositionOrder::column_after_row ? "cell(row b, col a) = Omega^a o Omega^b (b acts first)"
                                                   : "cell(row b, col a) = Omega^b o Omega^a (a acts first)";
}

int TableComparison::agree() const {
    return detected == CompositionOrder::column_after_row ? agree_column_after_row : agree_row_after_column;
}

TableComparison compare_with_printed_table(const QubitTriple& t) {
    std::array<TripleMap, kNumOmega> basis{omega_matrix(0, t), omega_matrix(1, t), omega_matrix(2, t),
                                           omega_matrix(3, t), omega_matrix(4, t), omega_matrix(5, t)};
    const auto& printed = printed_composition_table();
    CompositionTable col_after_row{}, row_after_col{};
    TableComparison cmp;
    for (int row = 0; row < kNumOmega; ++row) {
        for (int col = 0; col < kNumOmega; ++col) {
            const auto e1 = expand_in_basis(basis, basis[col].after(basis[row]));
            const auto e2 = expand_in_basis(basis, basis[row].after(basis[col]));
            cmp.max_residual = std::max({cmp.max_residual, e1.residual, e2.residual});
            for (int g = 0; g < kNumOmega; ++g) {
                col_after_row[row][col][g] = static_cast<int>(std::lround(e1.coeff[g]));
                row_after_col[row][col][g] = static_cast<int>(std::lround(e2.coeff[g]));
            }
            if (col_after_row[row][col] == printed[row][col]) ++cmp.agree_column_after_row;
            if (row_after_col[row][col] == printed[row][col]) ++cmp.agree_row_after_column;
        }
    }
    cmp.detected = cmp.agree_column_after_row >= cmp.agree_row_after_column ? CompositionOrder::column_after_row
                                                                            : CompositionOrder::row_after_column;
    cmp.computed = cmp.detected == CompositionOrder::column_after_row ? col_after_row : row_after_col;
    for (int row = 0; row < kNumOmega; ++row)
        for (int col = 0; col < kNumOmega; ++col) cmp.cell_agrees[row][col] = cmp.computed[row][col] == printed[row][col];
    return cmp;
}

StructureConstants constants_in_table_order(const StructureConstants& operator_product, CompositionOrder order) {
    return order == CompositionOrder::column_after_row ? operator_product : operator_product.swapped();
}

// ---------------------------------------------------------------------------

InverseResult monoid_inverse(const SuperOpCoeffs& lambda, const StructureConstants& c) {
    const Eigen::MatrixXd m = c.left_multiplication(lambda);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-10);
    InverseResult r;
    r.rank = static_cast<int>(lu.rank());
    if (!lu.isInvertible()) return r;
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(6);
    e0[0] = 1.0;
    // sum_b inv_b M_bg = delta_g0
    const Eigen::VectorXd x = m.transpose().fullPivLu().solve(e0);
    SuperOpCoeffs inv;
    for (int a = 0; a < 6; ++a) inv[a] = x[a];
    r.residual = (m.transpose() * x - e0).cwiseAbs().maxCoeff();
    r.inverse = inv;
    return r;
}

// ---------------------------------------------------------------------------

namespace {
Matrix sigma_dot_sigma() {
    Matrix s = Matrix::Zero(4, 4);
    for (int j = 1; j <= 3; ++j) s += kron(Matrix(pauli(j)), Matrix(pauli(j)));
    return s;
}
} // namespace

Matrix swap_matrix() { return 0.5 * (Matrix::Identity(4, 4) + sigma_dot_sigma()); }

Matrix swap_power(double phi) {
    const Complex e = std::exp(kI * (std::numbers::pi * phi));
    return 0.25 * ((3.0 + e) * Matrix::Identity(4, 4) + (1.0 - e) * sigma_dot_sigma());
}

Matrix swap_conjugate(double phi, const Matrix& a) {
    if (a.rows() != 4 || a.cols() != 4) throw std::invalid_argument("swap_conjugate: operand must be 4x4");
    return swap_power(-phi) * a * swap_power(phi);
}

Matrix singlet_projector() { return 0.5 * (Matrix::Identity(4, 4) - swap_matrix()); }

} // namespace qubitfield
