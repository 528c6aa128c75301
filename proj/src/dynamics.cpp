#include "qubitfield/dynamics.hpp"

#include "qubitfield/parallel.hpp"
#include "qubitfield/superop_algebra.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qubitfield {

namespace {
const Complex kI{0.0, 1.0};
}

void check_cfl(double dt, double dx, double mu) {
    if (!(dt > 0.0) || !(dx > 0.0)) throw CflViolation("leapfrog: spacings must be positive");
    if (dt > dx * (1.0 + 1e-12))
        throw CflViolation("leapfrog: CFL condition dt <= dx violated (dt/dx = " + std::to_string(dt / dx) + ")");
    if (dt * dt * (4.0 / (dx * dx) + mu) > 4.0 * (1.0 + 1e-12))
        throw CflViolation("leapfrog: dt^2 (4/dx^2 + mu) <= 4 violated for mu = " + std::to_string(mu));
}

LeapfrogStepper::LeapfrogStepper(double dt, double dx, double mu, Slice previous, Slice current)
    : dt_(dt), dx_(dx), mu_(mu), prev_(std::move(previous)), cur_(std::move(current)) {
    check_cfl(dt, dx, mu);
    if (prev_.size() != cur_.size() || cur_.size() < 3)
        throw std::invalid_argument("LeapfrogStepper: slices must have equal length >= 3");
    next_ = cur_;
}

void LeapfrogStepper::step() {
    const std::size_t nx = cur_.size();
    const double r2 = (dt_ * dt_) / (dx_ * dx_);
    const double a = 2.0 - 2.0 * r2 - dt_ * dt_ * mu_;
    parallel_for(nx, [&](std::size_t i) {
        const OperatorTriple& left = cur_[(i + nx - 1) % nx];
        const OperatorTriple& right = cur_[(i + 1) % nx];
        for (int j = 0; j < 3; ++j)
            next_[i][j] = a * cur_[i][j] + r2 * (left[j] + right[j]) - prev_[i][j];
    });
    std::swap(prev_, cur_);
    std::swap(cur_, next_);
    ++index_;
}

void LeapfrogStepper::reverse() { std::swap(prev_, cur_); }

Trajectory evolve_type1(double dt, double dx, const Slice& q0, const Slice& q1, double mu, int steps) {
    if (steps < 0) throw std::invalid_argument("evolve_type1: steps must be non-negative");
    Trajectory tr{dt, dx, {q0, q1}};
    LeapfrogStepper s(dt, dx, mu, q0, q1);
    for (int k = 0; k < steps; ++k) {
        s.step();
        tr.slices.push_back(s.current());
    }
    return tr;
}

Slice centered_velocity(const Slice& before, const Slice& after, double dt) {
    if (before.size() != after.size()) throw std::invalid_argument("centered_velocity: slice size mismatch");
    Slice v(before.size());
    const double s = 0.5 / dt;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * (after[i] - before[i]);
    return v;
}

Matrix energy_charge(const Slice& q, const Slice& qdot, double dx) {
    if (q.size() != qdot.size() || q.empty()) throw std::invalid_argument("energy_charge: slice size mismatch");
    const auto n = q[0][0].rows();
    Matrix e = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < q.size(); ++i)
        for (int j = 0; j < 3; ++j) e += q[i][j] * qdot[i][j] - qdot[i][j] * q[i][j];
    return (kI * (dx / 8.0)) * e;
}

Type7Charge type7_charge(const Slice& q, const Slice& qdot, double dx) {
    if (q.size() != qdot.size() || q.empty()) throw std::invalid_argument("type7_charge: slice size mismatch");
    const auto n = q[0][0].rows();
    Type7Charge c;
    for (int j = 0; j < 3; ++j) c.omega2[j] = c.omega5[j] = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const QubitTriple t = QubitTriple::unchecked(q[i]);
        c.omega2 += dx * omega_apply(2, t, qdot[i]);
        c.omega5 += dx * omega_apply(5, t, qdot[i]);
    }
    c.difference = triple_norm(c.omega2 - c.omega5);
    return c;
}

double slice_hermiticity_defect(const Slice& s) {
    double d = 0.0;
    for (const auto& t : s)
        for (const auto& m : t) d = std::max(d, (m - m.adjoint()).norm());
    return d;
}

double slice_algebra_residual(const Slice& s) {
    double d = 0.0;
    for (const auto& t : s) d = std::max(d, verify_triple(t).residual);
    return d;
}

// ---------------------------------------------------------------------------

PlaneWaveSolution::PlaneWaveSolution(std::size_t n, double length, double mu, int modes, Rng& rng)
    : n_(n), length_(length), mu_(mu) {
    if (modes < 1) throw std::invalid_argument("PlaneWaveSolution: need at least one mode");
    if (mu < 0.0) throw std::invalid_argument("PlaneWaveSolution: mu must be non-negative");
    const auto ni = static_cast<Eigen::Index>(n);
    if (mu == 0.0)
        c_ = random_hermitian_triple(n, rng);
    else
        c_ = {Matrix::Zero(ni, ni), Matrix::Zero(ni, ni), Matrix::Zero(ni, ni)};
    for (int m = 1; m <= modes; ++m) {
        Mode md;
        md.k = 2.0 * std::numbers::pi * m / length;
        md.w = std::sqrt(md.k * md.k + mu) * (m % 2 == 1 ? 1.0 : -1.0);
        md.a = (1.0 / m) * random_hermitian_triple(n, rng);
        md.b = (1.0 / m) * random_hermitian_triple(n, rng);
        modes_.push_back(std::move(md));
    }
}

OperatorTriple PlaneWaveSolution::value(double t, double x) const {
    OperatorTriple q = c_;
    for (const auto& m : modes_) {
        const double th = m.k * x - m.w * t;
        q += std::cos(th) * m.a;
        q += std::sin(th) * m.b;
    }
    return q;
}

OperatorTriple PlaneWaveSolution::velocity(double t, double x) const {
    const auto ni = static_cast<Eigen::Index>(n_);
    OperatorTriple v{Matrix::Zero(ni, ni), Matrix::Zero(ni, ni), Matrix::Zero(ni, ni)};
    for (const auto& m : modes_) {
        const double th = m.k * x - m.w * t;
        v += (m.w * std::sin(th)) * m.a;
        v += (-m.w * std::cos(th)) * m.b;
    }
    return v;
}

Slice PlaneWaveSolution::value_slice(double t, int nx) const {
    Slice s(nx);
    const double dx = length_ / nx;
    for (int i = 0; i < nx; ++i) s[i] = value(t, i * dx);
    return s;
}

Slice PlaneWaveSolution::velocity_slice(double t, int nx) const {
    Slice s(nx);
    const double dx = length_ / nx;
    for (int i = 0; i < nx; ++i) s[i] = velocity(t, i * dx);
    return s;
}

Matrix PlaneWaveSolution::exact_energy_charge(int nodes) const {
    return energy_charge(value_slice(0.0, nodes), velocity_slice(0.0, nodes), length_ / nodes);
}

ConservationRun run_conservation(const PlaneWaveSolution& sol, int nx, double courant, double duration,
                                 const std::function<void(long, double, const Matrix&)>& observer) {
    ConservationRun r;
    r.nx = nx;
    r.dx = sol.length() / nx;
    r.dt = courant * r.dx;
    r.steps = static_cast<int>(std::lround(duration / r.dt));
    const Matrix exact = sol.exact_energy_charge();
    const double scale = exact.norm();

    LeapfrogStepper s(r.dt, r.dx, sol.mu(), sol.value_slice(0.0, nx), sol.value_slice(r.dt, nx));
    r.hermiticity = std::max(slice_hermiticity_defect(s.previous()), slice_hermiticity_defect(s.current()));
    Matrix first;
    for (int k = 0; k < r.steps; ++k) {
        Slice before = s.previous();
        s.step();
        // charge at the middle slice, index s.index() - 1
        const Matrix e = energy_charge(s.previous(), centered_velocity(before, s.current(), r.dt), r.dx);
        if (k == 0) first = e;
        r.drift_vs_exact = std::max(r.drift_vs_exact, (e - exact).norm() / scale);
        r.internal_drift = std::max(r.internal_drift, (e - first).norm() / scale);
        r.hermiticity = std::max(r.hermiticity, slice_hermiticity_defect(s.current()));
        if (observer) observer(s.index() - 1, (s.index() - 1) * r.dt, e);
    }
    r.algebra_residual = slice_algebra_residual(s.current());
    return r;
}

double time_reversal_error(const PlaneWaveSolution& sol, int nx, double courant, int steps) {
    const double dx = sol.length() / nx;
    const double dt = courant * dx;
    const Slice q0 = sol.value_slice(0.0, nx);
    LeapfrogStepper s(dt, dx, sol.mu(), q0, sol.value_slice(dt, nx));
    for (int k = 0; k < steps; ++k) s.step();
    s.reverse();
    for (int k = 0; k < steps; ++k) s.step();
    // after reversal the stepper walks back; the last computed slice is t = 0
    double err = 0.0;
    for (int i = 0; i < nx; ++i) err = std::max(err, triple_norm(s.current()[i] - q0[i]));
    return err;
}

// ---------------------------------------------------------------------------

DivergenceCheck divergence_identity_check(const LatticeQubitField& q, const TripleDerivatives& d) {
    const Lattice& lat = q.lattice;
    const int m = d.time_margin;
    MatrixField vt(lat), vx(lat), wt(lat), wx(lat);
    parallel_for(lat.sites(), [&](std::size_t k) {
        const int n = static_cast<int>(k) / lat.nx;
        if (n < m || n >= lat.nt - m) return;
        const OperatorTriple& qq = q.q.at(k);
        const auto dim = qq[0].rows();
        Matrix a = Matrix::Zero(dim, dim), b = a, c = a, e = a;
        for (int j = 0; j < 3; ++j) {
            a += d.dt.at(k)[j] * qq[j];
            b += d.dx.at(k)[j] * qq[j];
            for (int kk = 0; kk < 3; ++kk)
                for (int l = 0; l < 3; ++l)
                    if (const int s = levi_civita(j, kk, l)) {
                        c += double(s) * (qq[j] * d.dt.at(k)[kk] * qq[l]);
                        e += double(s) * (qq[j] * d.dx.at(k)[kk] * qq[l]);
                    }
        }
        vt.at(k) = a;
        vx.at(k) = b;
        wt.at(k) = c;
        wx.at(k) = e;
    });
    const MatrixField dvt = central_dt(lat, vt, m);
    const MatrixField dvx = central_dx(lat, vx, m + 1);
    const MatrixField dwt = central_dt(lat, wt, m);
    const MatrixField dwx = central_dx(lat, wx, m + 1);

    DivergenceCheck out;
    out.first.norm = SiteField<double>(lat);
    out.second.norm = SiteField<double>(lat);
    out.first.time_margin = out.second.time_margin = m + 1;
    parallel_for(lat.sites(), [&](std::size_t k) {
        const int n = static_cast<int>(k) / lat.nx;
        if (n < m + 1 || n >= lat.nt - m - 1) return;
        const OperatorTriple& qq = q.q.at(k);
        const auto dim = qq[0].rows();
        Matrix rhs = Matrix::Zero(dim, dim);
        for (int j = 0; j < 3; ++j) rhs += 0.5 * (d.box.at(k)[j] * qq[j] - qq[j] * d.box.at(k)[j]);
        out.first.norm.at(k) = (dvt.at(k) - dvx.at(k) - rhs).norm();
        out.second.norm.at(k) = (dwt.at(k) - dwx.at(k)).norm();
    });
    return out;
}

} // namespace qubitfield
