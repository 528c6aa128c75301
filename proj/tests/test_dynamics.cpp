#include "qubitfield/dynamics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qubitfield;

namespace {

double slice_diff(const Slice& a, const Slice& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, triple_norm(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("CFL limits") {
    CHECK_NOTHROW(check_cfl(0.1, 0.1, 0.0));
    CHECK_NOTHROW(check_cfl(0.05, 0.1, 10.0));
    CHECK_THROWS_AS(check_cfl(0.11, 0.1, 0.0), CflViolation);
    CHECK_THROWS_AS(check_cfl(0.1, 0.1, 1.0), CflViolation);
    CHECK_THROWS_AS(check_cfl(0.0, 0.1, 0.0), CflViolation);
    CHECK_THROWS_AS(check_cfl(0.15, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("one leapfrog step") {
    Rng rng(1);
    const int nx = 5;
    Slice prev(nx), cur(nx);
    for (int i = 0; i < nx; ++i) {
        prev[i] = random_hermitian_triple(2, rng);
        cur[i] = random_hermitian_triple(2, rng);
    }
    const double dt = 0.05, dx = 0.1, mu = 2.0;
    LeapfrogStepper s(dt, dx, mu, prev, cur);
    CHECK(s.index() == 1);
    s.step();
    CHECK(s.index() == 2);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < 3; ++j) {
            const Matrix lap = (cur[(i + 1) % nx][j] + cur[(i + nx - 1) % nx][j] - 2.0 * cur[i][j]) / (dx * dx);
            const Matrix expected = 2.0 * cur[i][j] - prev[i][j] + dt * dt * (lap - mu * cur[i][j]);
            CHECK((s.current()[i][j] - expected).norm() < 1e-12);
            CHECK((s.previous()[i][j] - cur[i][j]).norm() == 0.0);
        }
    CHECK(slice_hermiticity_defect(s.current()) == 0.0);

    CHECK_THROWS_AS(LeapfrogStepper(dt, dx, mu, prev, Slice(nx - 1)), std::invalid_argument);

    const Trajectory tr = evolve_type1(dt, dx, prev, cur, mu, 3);
    CHECK(tr.slices.size() == 5);
    CHECK(slice_diff(tr.slices[2], s.current()) < 1e-15);
    CHECK(evolve_type1(dt, dx, prev, cur, mu, 0).slices.size() == 2);
    CHECK_THROWS_AS(evolve_type1(dt, dx, prev, cur, mu, -1), std::invalid_argument);
}

TEST_CASE("single-site charge") {
    Rng rng(2);
    const QubitTriple t = embed_triple(4).conjugated(random_unitary(4, rng));
    const Matrix k = random_hermitian(4, rng);
    OperatorTriple qdot;
    for (int j = 0; j < 3; ++j) qdot[j] = Complex(0.0, 1.0) * commutator(k, t[j]);
    // with qdot = i[K, q]: E = dx (3K - q_j K q_j) / 4
    Matrix expected = 3.0 * k;
    for (int j = 0; j < 3; ++j) expected -= t[j] * k * t[j];
    expected *= 0.25 * 0.3;
    CHECK((energy_charge(Slice{t.ops()}, Slice{qdot}, 0.3) - expected).norm() < 1e-12);
}

TEST_CASE("plane-wave solutions") {
    Rng rng(3);
    for (double mu : {0.0, 3.0}) {
        CAPTURE(mu);
        const PlaneWaveSolution sol(4, 1.0, mu, 3, rng);
        const double t = 0.31, x = 0.47, h = 1e-4;
        const OperatorTriple q = sol.value(t, x);
        for (int j = 0; j < 3; ++j) CHECK(is_hermitian(q[j]));
        const OperatorTriple qtt =
            (1.0 / (h * h)) * (sol.value(t + h, x) + sol.value(t - h, x) - 2.0 * q);
        const OperatorTriple qxx =
            (1.0 / (h * h)) * (sol.value(t, x + h) + sol.value(t, x - h) - 2.0 * q);
        CHECK(triple_norm(qtt - qxx + mu * q) < 1e-4);
        const double hv = 1e-6;
        const OperatorTriple qt = (0.5 / hv) * (sol.value(t + hv, x) - sol.value(t - hv, x));
        CHECK(triple_norm(qt - sol.velocity(t, x)) < 1e-6);
        CHECK(triple_norm(sol.value(t, x + 1.0) - q) < 1e-12);

        // the continuum charge is time independent and Hermitian
        const Matrix e = sol.exact_energy_charge();
        CHECK(is_hermitian(e, 1e-12));
        for (double tt : {0.0, 0.37, 1.2}) {
            const Matrix et = energy_charge(sol.value_slice(tt, 512), sol.velocity_slice(tt, 512), 1.0 / 512);
            CHECK((et - e).norm() < 1e-10 * std::max(1.0, e.norm()));
        }
    }
}

TEST_CASE("charge conservation and reversibility") {
    Rng rng(4);
    const PlaneWaveSolution sol(4, 1.0, 0.0, 3, rng);
    const ConservationRun coarse = run_conservation(sol, 32, 0.5, 1.0);
    const ConservationRun fine = run_conservation(sol, 64, 0.5, 1.0);
    CHECK(coarse.steps == 64);
    CHECK(coarse.internal_drift < 1e-12);
    CHECK(fine.internal_drift < 1e-12);
    CHECK(coarse.hermiticity == 0.0);
    const double ratio = coarse.drift_vs_exact / fine.drift_vs_exact;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);

    int calls = 0;
    run_conservation(sol, 16, 0.5, 0.5, [&](long, double, const Matrix&) { ++calls; });
    CHECK(calls > 0);

    CHECK(time_reversal_error(sol, 32, 0.5, 100) < 1e-10);
    CHECK_THROWS_AS(run_conservation(sol, 32, 1.5, 1.0), CflViolation);
}

TEST_CASE("type VII charge forms on the ansatz") {
    const int nx = 32;
    const double dx = 1.0 / nx, k = 2.0 * std::numbers::pi;
    const Lattice lat(nx, nx, dx / 2, dx);
    const ScalarField phi = harmonic_scalar(lat, {{0.5, k, 1, 0.3}, {0.2, 2 * k, -1, 0.1}});
    const LatticeQubitField q = ansatz_field(phi);
    const TripleDerivatives an = ansatz_derivatives(phi);
    Slice s(nx), v(nx);
    for (int i = 0; i < nx; ++i) {
        s[i] = q.q(7, i);
        v[i] = an.dt(7, i);
    }
    const Type7Charge c = type7_charge(s, v, dx);
    CHECK(c.difference < 1e-12);
    CHECK(triple_norm(c.omega2) > 1e-3);
}

TEST_CASE("divergence identities") {
    const double k = 2.0 * std::numbers::pi;
    std::vector<double> first;
    for (int nx : {32, 64}) {
        const Lattice lat(nx, nx, 0.5 / nx, 1.0 / nx);
        const ScalarField phi = harmonic_scalar(lat, {{0.5, k, 1, 0.3}, {0.2, 2 * k, -1, 0.1}});
        const DivergenceCheck d = divergence_identity_check(ansatz_field(phi), ansatz_derivatives(phi));
        first.push_back(d.first.stats().rms);
        CHECK(d.second.stats().max < 1e-9);
    }
    const double ratio = first[0] / first[1];
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);

    Rng rng(5);
    const LatticeQubitField bad = rotated_pauli_field(Lattice(32, 32, 0.5 / 32, 1.0 / 32), rng);
    const DivergenceCheck d = divergence_identity_check(bad, fd_derivatives(bad));
    CHECK(d.second.stats().max > 1.0);
}
