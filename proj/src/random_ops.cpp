#include "qubitfield/random_ops.hpp"

#include <Eigen/QR>

namespace qubitfield {

Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const double re = g(rng);
            const double im = g(rng);
            m(r, c) = Complex(re, im);
        }
    return m;
}

Matrix random_hermitian(std::size_t n, Rng& rng) {
    const Matrix g = random_gaussian(n, n, rng);
    return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(std::size_t n, Rng& rng) {
    const Matrix g = random_gaussian(n, n, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const Complex d = r(k, k);
        if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
    }
    return q;
}

Matrix random_density(std::size_t n, Rng& rng) {
    const Matrix g = random_gaussian(n, n, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

Eigen::VectorXcd random_state(std::size_t n, Rng& rng) {
    Eigen::VectorXcd v = random_gaussian(n, 1, rng);
    return v / v.norm();
}

OperatorTriple random_hermitian_triple(std::size_t n, Rng& rng) {
    return {random_hermitian(n, rng), random_hermitian(n, rng), random_hermitian(n, rng)};
}

} // namespace qubitfield
