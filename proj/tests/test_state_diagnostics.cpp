#include "qubitfield/state_diagnostics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qubitfield;

TEST_CASE("density operator validation") {
    CHECK_NOTHROW(DensityOperator::maximally_mixed(4));
    Matrix bad_trace = identity(2);
    CHECK_THROWS_AS(DensityOperator{bad_trace}, std::invalid_argument);
    Matrix negative = Matrix::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityOperator{negative}, std::invalid_argument);
    Matrix nonherm = 0.5 * identity(2);
    nonherm(0, 1) = 0.2;
    CHECK_THROWS_AS(DensityOperator{nonherm}, std::invalid_argument);

    const DensityOperator rho = DensityOperator::maximally_mixed(2);
    CHECK(expectation(rho, Matrix(pauli(3))) == doctest::Approx(0.0));
    CHECK(expectation(rho, identity(2)) == doctest::Approx(1.0));
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(expectation(rho, a), std::invalid_argument);
}

TEST_CASE("local density operator") {
    Rng rng(1);
    const QubitTriple t = embed_triple(6).conjugated(random_unitary(6, rng));
    const DensityOperator rho(random_density(6, rng));
    const LocalDensity l = local_density(rho, t);
    CHECK(l.trace == doctest::Approx(3.0));
    CHECK(l.observable_check < 1e-12);
    for (int j = 0; j < 3; ++j) CHECK(l.bloch[j] == doctest::Approx(expectation(rho, t[j])));
    // reduced qubit state in the product frame, trace over the rest
    const Matrix2 red = partial_trace_rest(t, rho.matrix());
    for (int j = 0; j < 3; ++j) CHECK((red * pauli(j + 1)).trace().real() == doctest::Approx(l.bloch[j]));
}

TEST_CASE("entanglement witness") {
    Rng rng(2);
    const QubitTriple t = embed_triple(4).conjugated(random_unitary(4, rng));

    const DensityOperator bell = bell_state(t);
    CHECK(entanglement_witness(bell, t).norm == doctest::Approx(2.0 * std::sqrt(3.0)));
    const LocalDensity lb = local_density(bell, t);
    for (double m : lb.bloch) CHECK(std::abs(m) < 1e-12);
    CHECK(lb.trace == doctest::Approx(2.0));

    CHECK(entanglement_witness(DensityOperator::maximally_mixed(4), t).norm < 1e-14);

    const DensityOperator p = product_state(t, {0.3, -0.4, 0.5});
    CHECK(entanglement_witness(p, t).norm < 1e-12);
    const LocalDensity lp = local_density(p, t);
    CHECK(lp.bloch[0] == doctest::Approx(0.3));
    CHECK(lp.bloch[1] == doctest::Approx(-0.4));
    CHECK(lp.bloch[2] == doctest::Approx(0.5));
    CHECK_THROWS_AS(product_state(t, {1.0, 1.0, 0.0}), std::invalid_argument);

    for (int k = 0; k < 20; ++k) {
        CHECK(entanglement_witness(random_product_state(t, rng), t).norm < 1e-10);
        CHECK(entanglement_witness(random_entangled_state(t, rng), t).norm > 1e-6);
    }

    const QubitTriple t6 = embed_triple(6).conjugated(random_unitary(6, rng));
    CHECK(entanglement_witness(random_product_state(t6, rng), t6).norm < 1e-10);
    CHECK(entanglement_witness(random_entangled_state(t6, rng), t6).norm > 1e-6);
    CHECK_THROWS_AS(bell_state(t6), std::invalid_argument);
}

TEST_CASE("derivative of the witness trace") {
    const double k = 2.0 * std::numbers::pi;
    Rng rng(3);
    const Eigen::VectorXcd a = random_state(2, rng), b = random_state(2, rng);
    std::vector<double> diff;
    for (int nx : {32, 64}) {
        const Lattice lat(nx, nx, 0.5 / nx, 1.0 / nx);
        const ScalarField phi = harmonic_scalar(lat, {{0.5, k, 1, 0.3}, {0.2, 2 * k, -1, 0.1}});
        const LatticeQubitField q = ansatz_field(phi);
        const HamiltonianField h = hamiltonian_field(q, fd_derivatives(q));
        const int n = 3 * nx / 8, i = nx / 8;
        const DensityOperator rho = product_state(q.triple(n, i), a * a.adjoint(), b * b.adjoint());
        const DTraceCheck c = dtrace_identity_check(rho, q, h, n, i, 0);
        CHECK_FALSE(c.refused);
        CHECK(c.max_magnitude > 0.1);
        diff.push_back(c.max_difference);

        CHECK(stationarity_check(DensityOperator::maximally_mixed(4), h.ht(n, i), h.hx(n, i), q.triple(n, i),
                                 {1.0, 0.0}) < 1e-14);

        const DTraceCheck refused = dtrace_identity_check(bell_state(q.triple(n, i)), q, h, n, i, 1);
        CHECK(refused.refused);
        CHECK(refused.diagnostic.find("entangled") != std::string::npos);
        CHECK_THROWS_AS(dtrace_identity_check(rho, q, h, 0, i, 0), std::invalid_argument);
        CHECK_THROWS_AS(dtrace_identity_check(rho, q, h, n, i, 2), std::invalid_argument);
    }
    CHECK(diff[0] / diff[1] > 2.5);
}
