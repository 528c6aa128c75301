#include "qubitfield/field_lattice.hpp"
#include "qubitfield/superop_algebra.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace qubitfield;

namespace {

constexpr double kPi = std::numbers::pi;

Lattice small(int nx = 32) { return Lattice(nx, nx, 0.5 / nx, 1.0 / nx); }

double triple_diff(const OperatorTriple& a, const OperatorTriple& b) { return triple_norm(a - b); }

SuperOpCoeffs omega25() {
    SuperOpCoeffs l;
    l[2] = 1.0;
    l[5] = 1.0;
    return l;
}

} // namespace

TEST_CASE("lattice validation") {
    CHECK_NOTHROW(Lattice(4, 4, 0.1, 0.1));
    CHECK_THROWS_AS(Lattice(3, 8, 0.1, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(Lattice(8, 8, 0.3, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(Lattice(8, 8, 0.0, 0.2), std::invalid_argument);
    const Lattice lat(8, 10, 0.05, 0.1);
    CHECK(lat.wrap(-1) == 9);
    CHECK(lat.wrap(10) == 0);
    CHECK(lat.length() == doctest::Approx(1.0));
    CHECK(lat.sites() == 80);
}

TEST_CASE("finite differences on scalar samples") {
    const Lattice lat = small(16);
    const double k = 2.0 * kPi / lat.length();
    SiteField<double> f(lat);
    for (int n = 0; n < lat.nt; ++n)
        for (int i = 0; i < lat.nx; ++i) f(n, i) = lat.time(n) * lat.time(n) + std::cos(k * lat.position(i));

    const auto ft = central_dt(lat, f);
    const auto fx = central_dx(lat, f);
    const auto box = dalembertian(lat, f);
    // closed forms of the stencils applied to t^2 and cos(kx)
    const double sx = std::sin(k * lat.dx) / lat.dx;
    const double cx = (2.0 * std::cos(k * lat.dx) - 2.0) / (lat.dx * lat.dx);
    for (int n = 1; n < lat.nt - 1; ++n)
        for (int i = 0; i < lat.nx; ++i) {
            CHECK(ft(n, i) == doctest::Approx(2.0 * lat.time(n)));
            CHECK(fx(n, i) == doctest::Approx(-sx * std::sin(k * lat.position(i))));
            CHECK(box(n, i) == doctest::Approx(2.0 - cx * std::cos(k * lat.position(i))));
        }
    CHECK_THROWS_AS(dalembertian(Lattice(5, 16, 0.01, 0.1), f), std::invalid_argument);
}

TEST_CASE("scalar modes") {
    const Lattice lat = small();
    const double k = 2.0 * kPi / lat.length();
    const ScalarField phi = harmonic_scalar(lat, {{0.5, k, 1, 0.3}, {0.2, 2.0 * k, -1, 0.0}});
    CHECK(phi.has_jet());
    const double t = lat.time(5), x = lat.position(7);
    CHECK(phi(5, 7) == doctest::Approx(0.5 * std::cos(k * (x - t) + 0.3) + 0.2 * std::cos(2.0 * k * (x + t))));
    const ScalarJet j = phi.jet(5, 7);
    CHECK(j.box == doctest::Approx(0.0));
    CHECK(j.dt == doctest::Approx(0.5 * k * std::sin(k * (x - t) + 0.3) - 0.4 * k * std::sin(2.0 * k * (x + t))));
    CHECK_THROWS_AS(harmonic_scalar(lat, {{0.5, 1.0, 1, 0.0}}), std::invalid_argument);

    const ScalarField sw = standing_wave(lat, 0.5, 1);
    CHECK(sw(3, 4) == doctest::Approx(0.5 * std::cos(k * lat.position(4)) * std::cos(k * lat.time(3))));
    CHECK(sw.jet(3, 4).box == doctest::Approx(0.0));

    const ScalarField s = ScalarField::sampled(lat, SiteField<double>(lat, 1.0));
    CHECK_FALSE(s.has_jet());
    CHECK_THROWS_AS(s.jet(1, 1), std::logic_error);
}

TEST_CASE("ansatz triple") {
    const QubitTriple e = embed_triple(4);
    for (int j = 0; j < 3; ++j) {
        const Matrix right = kron(identity(2), Matrix(pauli(j + 1)));
        CHECK((ansatz_triple(0.0)[j] - e[j]).norm() < 1e-15);
        CHECK((ansatz_triple(1.0)[j] - right).norm() < 1e-14);
    }
    for (double phi : {-0.7, 0.13, 0.5, 1.9}) {
        CAPTURE(phi);
        const OperatorTriple q = ansatz_triple(phi);
        CHECK(verify_triple(q).residual < 1e-14);
        // the same triple by conjugating with a power of the swap
        for (int j = 0; j < 3; ++j) CHECK((swap_conjugate(phi, e[j]) - q[j]).norm() < 1e-13);

        const double h = 1e-4;
        const OperatorTriple d1 = (1.0 / (2.0 * h)) * (ansatz_triple(phi + h) - ansatz_triple(phi - h));
        const OperatorTriple d2 =
            (1.0 / (h * h)) * (ansatz_triple(phi + h) + ansatz_triple(phi - h) - 2.0 * ansatz_triple(phi));
        CHECK(triple_diff(d1, ansatz_prime(phi)) < 1e-6);
        CHECK(triple_diff(d2, ansatz_second(phi)) < 1e-5);
    }
}

TEST_CASE("ansatz field solves the Omega2 + Omega5 equation") {
    const Lattice lat = small();
    const ScalarField phi = standing_wave(lat, 0.5, 1);
    const LatticeQubitField q = ansatz_field(phi);
    CHECK(q.dim == 4);
    CHECK(q.max_algebra_residual() < 1e-13);

    const TripleDerivatives an = ansatz_derivatives(phi);
    CHECK(eom_residual(q, an.box, 0, EomSpec(omega25(), 0.0)).stats().max < 1e-10);
    CHECK(eom_residual(q, an.box, 0, EomSpec(SuperOpCoeffs::unit(0), 0.0)).stats().max > 1.0);

    const TripleDerivatives fd = fd_derivatives(q);
    CHECK(fd.time_margin == 1);
    const auto r = eom_residual(q, fd.box, fd.time_margin, EomSpec(omega25(), 0.0)).stats();
    CHECK(r.sites == std::size_t(lat.nx) * (lat.nt - 2));
    CHECK(r.max > 1e-6);

    const TypeOneNoGo ng = type1_nogo(q, an.box, 0);
    CHECK(ng.ratio > 0.9);
    CHECK(ng.box_norm > 1.0);

    CHECK(first_derivative_identity_residual(q, an).stats().max < 1e-10);
}

TEST_CASE("gauge potential and Hamiltonian") {
    const Lattice lat = small();
    const ScalarField phi = standing_wave(lat, 0.5, 1);
    const LatticeQubitField q = ansatz_field(phi);
    const TripleDerivatives an = ansatz_derivatives(phi);
    const GaugeField g = gauge_potential(phi);
    const GaugeChecks gc = gauge_checks(phi, g, q, an);
    CHECK(gc.unitarity < 1e-13);
    CHECK(gc.reconstruction < 1e-13);
    CHECK(gc.potential_derivative.max < 1e-10);

    const HamiltonianField h = hamiltonian_field(q, an);
    const HamiltonianChecks hc = hamiltonian_checks(q, an, h);
    CHECK(hc.hamiltonian_derivative.max < 1e-10);
    CHECK(hc.commutant.max < 1e-12);
    CHECK(h.max_asymmetry < 1e-10);
    for (int n = 0; n < lat.nt; n += 7)
        for (int i = 0; i < lat.nx; i += 5) CHECK(is_hermitian(h.ht(n, i), 1e-12));
}

TEST_CASE("antisymmetrized form of the type VIII operator") {
    Rng rng(4);
    const QubitTriple t = embed_triple(4).conjugated(random_unitary(4, rng));
    const Eq35Constant k = eq35_constant(t, rng);
    CHECK(k.kappa.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(k.kappa.imag() == doctest::Approx(-0.5));
    CHECK(k.misfit < 1e-12);

    const Lattice lat = small();
    const ScalarField phi = standing_wave(lat, 0.5, 1);
    const LatticeQubitField q = ansatz_field(phi);
    const Eq35Report rep = eq35_equivalence(q, analytic_box_ansatz(phi), 0, rng);
    CHECK(rep.difference.stats().max < 1e-10);
    CHECK(rep.explicit_form.stats().max < 1e-10);
}

TEST_CASE("convergence order fit") {
    const std::vector<double> h{0.1, 0.05, 0.025};
    CHECK(convergence_order(h, {3e-2, 7.5e-3, 1.875e-3}) == doctest::Approx(2.0));
    CHECK(convergence_order(h, {0.1, 0.05, 0.025}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(convergence_order({0.1}, {0.1}), std::invalid_argument);
    CHECK_THROWS_AS(convergence_order(h, {1.0, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("rotated Pauli negative control") {
    Rng rng(2);
    const LatticeQubitField f = rotated_pauli_field(small(16), rng);
    const OperatorTriple& q = f.q(3, 5);
    for (int j = 0; j < 3; ++j) {
        CHECK((q[j] * q[j] - identity(4)).norm() < 1e-12);
        CHECK(is_hermitian(q[j]));
    }
    CHECK(f.max_algebra_residual() > 0.1);
}

TEST_CASE("snapshot round trip") {
    const Lattice lat(4, 6, 0.1, 0.2);
    const LatticeQubitField q = ansatz_field(harmonic_scalar(lat, {{0.3, 2.0 * kPi / lat.length(), 1, 0.2}}));
    std::stringstream ss;
    write_snapshot(ss, q);
    const LatticeQubitField back = read_snapshot(ss);
    CHECK(back.lattice.nt == 4);
    CHECK(back.lattice.nx == 6);
    CHECK(back.lattice.dt == lat.dt);
    CHECK(back.lattice.dx == lat.dx);
    CHECK(back.dim == 4);
    for (int n = 0; n < 4; ++n)
        for (int i = 0; i < 6; ++i) CHECK(triple_diff(back.q(n, i), q.q(n, i)) == 0.0);

    std::stringstream bad("lattice 4 6 0.1 0.2 4\n0 0 1\ndims 4 4\n");
    CHECK_THROWS_AS(read_snapshot(bad), std::runtime_error);
    std::stringstream header("grid 4 6 0.1 0.2 4\n");
    CHECK_THROWS_AS(read_snapshot(header), std::runtime_error);
}
