#include "qubitfield/state_diagnostics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace qubitfield {

namespace {
const Complex kI{0.0, 1.0};
}

DensityOperator::DensityOperator(Matrix rho, double tol) : rho_(std::move(rho)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols())
        throw std::invalid_argument("DensityOperator: matrix must be square and nonempty");
    if ((rho_ - rho_.adjoint()).norm() > tol * std::max(1.0, rho_.norm()))
        throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
    const Complex tr = rho_.trace();
    if (std::abs(tr - 1.0) > 1e-10) throw std::invalid_argument("DensityOperator: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw std::invalid_argument("DensityOperator: matrix has a negative eigenvalue");
}

DensityOperator DensityOperator::maximally_mixed(std::size_t n) {
    return DensityOperator(identity(n) / double(n));
}

DensityOperator DensityOperator::pure(const Eigen::VectorXcd& psi) {
    const Eigen::VectorXcd v = psi / psi.norm();
    return DensityOperator(v * v.adjoint());
}

double expectation(const DensityOperator& rho, const Matrix& a) {
    if (a.rows() != rho.matrix().rows() || a.cols() != a.rows())
        throw std::invalid_argument("expectation: dimension mismatch");
    if (!is_hermitian(a, 1e-12 * std::max(1.0, a.norm())))
        throw std::invalid_argument("expectation: observable is not Hermitian");
    const Complex v = (a * rho.matrix()).trace();
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, a.norm()))
        throw std::logic_error("expectation: imaginary part " + std::to_string(v.imag()) + " exceeds tolerance");
    return v.real();
}

LocalDensity local_density(const DensityOperator& rho, const QubitTriple& t) {
    if (rho.dim() != t.dim()) throw std::invalid_argument("local_density: dimension mismatch");
    LocalDensity l;
    const Matrix one = identity(t.dim());
    l.rho_local = one;
    for (int j = 0; j < 3; ++j) {
        l.bloch[j] = expectation(rho, t[j]);
        l.rho_local += l.bloch[j] * t[j];
    }
    l.rho_local *= 0.5;
    l.trace = l.rho_local.trace().real();

    const std::array<std::array<double, 4>, 5> probes{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1},
                                                       {1, 1, 1, 1}}};
    for (const auto& a : probes) {
        Matrix obs = a[0] * one;
        for (int j = 0; j < 3; ++j) obs += a[j + 1] * t[j];
        const double local = (obs * l.rho_local).trace().real() / l.trace;
        l.observable_check = std::max(l.observable_check, std::abs(local - expectation(rho, obs)));
    }
    return l;
}

namespace {

Matrix witness_with_coefficients(const Matrix& rho, const QubitTriple& t, const std::array<Complex, 3>& m) {
    Matrix d = 3.0 * rho;
    for (int j = 0; j < 3; ++j) {
        d -= t[j] * rho * t[j];
        Matrix bracket = anticommutator(t[j], rho);
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
                if (const int e = levi_civita(j, k, l)) bracket += (kI * double(e)) * (t[l] * rho * t[k]);
        d -= m[j] * bracket;
    }
    return d;
}

std::array<Complex, 3> coefficients(const Matrix& rho, const QubitTriple& t) {
    std::array<Complex, 3> m;
    for (int j = 0; j < 3; ++j) m[j] = (rho * t[j]).trace();
    return m;
}

} // namespace

Witness entanglement_witness(const Matrix& rho, const QubitTriple& t) {
    if (rho.rows() != static_cast<Eigen::Index>(t.dim()))
        throw std::invalid_argument("entanglement_witness: dimension mismatch");
    Witness w;
    w.d = witness_with_coefficients(rho, t, coefficients(rho, t));
    w.norm = w.d.norm();
    return w;
}

Witness entanglement_witness(const DensityOperator& rho, const QubitTriple& t) {
    return entanglement_witness(rho.matrix(), t);
}

double stationarity_check(const DensityOperator& rho, const Matrix& ht, const Matrix& hx, const QubitTriple& t,
                          const std::array<double, 2>& n) {
    const Matrix h = n[0] * ht + n[1] * hx;
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs((commutator(h, t[j]) * rho.matrix()).trace()));
    return worst;
}

DTraceCheck dtrace_identity_check(const DensityOperator& rho, const LatticeQubitField& q, const HamiltonianField& h,
                                  int n, int i, int mu, double threshold) {
    const Lattice& lat = q.lattice;
    if (mu != 0 && mu != 1) throw std::invalid_argument("dtrace_identity_check: direction must be 0 (t) or 1 (x)");
    const int margin = std::max(1, h.time_margin);
    if (n < margin || n >= lat.nt - margin)
        throw std::invalid_argument("dtrace_identity_check: site is not interior in time");

    DTraceCheck c;
    const QubitTriple t = q.triple(n, i);
    const Matrix& r = rho.matrix();
    c.witness_norm = entanglement_witness(r, t).norm;
    if (c.witness_norm > threshold) {
        std::ostringstream os;
        os << "state is entangled at site (" << n << ", " << i << "): ||D|| = " << c.witness_norm
           << " exceeds " << threshold;
        c.refused = true;
        c.diagnostic = os.str();
        return c;
    }

    const QubitTriple plus = mu == 0 ? q.triple(n + 1, i) : q.triple(n, lat.wrap(i + 1));
    const QubitTriple minus = mu == 0 ? q.triple(n - 1, i) : q.triple(n, lat.wrap(i - 1));
    const double step = 2.0 * (mu == 0 ? lat.dt : lat.dx);
    const auto m0 = coefficients(r, t);
    const Matrix dd = (witness_with_coefficients(r, plus, m0) - witness_with_coefficients(r, minus, m0)) / step;
    const Matrix dd_full = (entanglement_witness(r, plus).d - entanglement_witness(r, minus).d) / step;
    const Matrix& hm = mu == 0 ? h.ht(n, i) : h.hx(n, i);
    for (int k = 0; k < 3; ++k) {
        c.lhs[k] = (t[k] * dd).trace();
        c.lhs_full[k] = (t[k] * dd_full).trace();
        c.rhs[k] = 4.0 * kI * (commutator(hm, t[k]) * r).trace();
        c.max_difference = std::max(c.max_difference, std::abs(c.lhs[k] - c.rhs[k]));
        c.max_magnitude = std::max({c.max_magnitude, std::abs(c.lhs[k]), std::abs(c.rhs[k])});
    }
    return c;
}

// ---------------------------------------------------------------------------

DensityOperator product_state(const QubitTriple& t, const Matrix& rho_qubit, const Matrix& rho_rest) {
    const ProductFrame frame(t);
    if (rho_qubit.rows() != 2 || rho_rest.rows() * 2 != static_cast<Eigen::Index>(t.dim()))
        throw std::invalid_argument("product_state: factor dimensions do not match the split");
    Matrix r = frame.from_product(kron(rho_qubit, rho_rest));
    r = 0.5 * (r + r.adjoint());
    return DensityOperator(r);
}

DensityOperator product_state(const QubitTriple& t, const std::array<double, 3>& bloch) {
    const double len = std::sqrt(bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]);
    if (len > 1.0 + 1e-12) throw std::invalid_argument("product_state: Bloch vector longer than 1");
    Matrix q = Matrix::Identity(2, 2);
    for (int j = 0; j < 3; ++j) q += bloch[j] * Matrix(pauli(j + 1));
    const std::size_t rest = t.dim() / 2;
    return product_state(t, 0.5 * q, identity(rest) / double(rest));
}

DensityOperator bell_state(const QubitTriple& t) {
    if (t.dim() != 4) throw std::invalid_argument("bell_state: needs N = 4");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi[0] = psi[3] = 1.0 / std::sqrt(2.0);
    const ProductFrame frame(t);
    const Eigen::VectorXcd v = frame.basis() * psi;
    return DensityOperator::pure(v);
}

DensityOperator random_product_state(const QubitTriple& t, Rng& rng) {
    const std::size_t rest = t.dim() / 2;
    const Eigen::VectorXcd a = random_state(2, rng);
    const Eigen::VectorXcd b = random_state(rest, rng);
    return product_state(t, a * a.adjoint(), b * b.adjoint());
}

DensityOperator random_entangled_state(const QubitTriple& t, Rng& rng) {
    const std::size_t rest = t.dim() / 2;
    const Matrix ua = random_unitary(2, rng);
    const Matrix ub = random_unitary(rest, rng);
    std::uniform_real_distribution<double> u(0.1, 1.0 / std::sqrt(2.0));
    const double s = u(rng);
    const double c = std::sqrt(1.0 - s * s);
    const Matrix psi_prod = c * kron(ua.col(0), ub.col(0)) + s * kron(ua.col(1), ub.col(1));
    const ProductFrame frame(t);
    return DensityOperator::pure(frame.basis() * psi_prod.col(0));
}

} // namespace qubitfield
