#include "qubitfield/field_lattice.hpp"

#include "qubitfield/matrix_io.hpp"
#include "qubitfield/parallel.hpp"
#include "qubitfield/superop_algebra.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

namespace qubitfield {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

struct PauliProducts {
    std::array<Matrix, 3> left;  // s_j (x) 1
    std::array<Matrix, 3> right; // 1 (x) s_j
    std::array<Matrix, 3> eps;   // eps_jkl s_k (x) s_l
};

const PauliProducts& pauli_products() {
    static const PauliProducts p = [] {
        PauliProducts out;
        const Matrix one = Matrix::Identity(2, 2);
        for (int j = 0; j < 3; ++j) {
            const Matrix s = pauli(j + 1);
            out.left[j] = kron(s, one);
            out.right[j] = kron(one, s);
            out.eps[j] = Matrix::Zero(4, 4);
        }
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    if (const int e = levi_civita(j, k, l))
                        out.eps[j] += double(e) * kron(Matrix(pauli(k + 1)), Matrix(pauli(l + 1)));
        return out;
    }();
    return p;
}

Complex inner(const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace(); }

Complex inner(const OperatorTriple& a, const OperatorTriple& b) {
    Complex s = 0.0;
    for (int j = 0; j < 3; ++j) s += inner(a[j], b[j]);
    return s;
}

} // namespace

Lattice::Lattice(int nt_, int nx_, double dt_, double dx_) : nt(nt_), nx(nx_), dt(dt_), dx(dx_) {
    if (nt < 4 || nx < 4)
        throw std::invalid_argument("Lattice: nt and nx must be at least 4 (got " + std::to_string(nt) + ", " +
                                    std::to_string(nx) + ")");
    if (!(dt > 0.0) || !(dx > 0.0)) throw std::invalid_argument("Lattice: spacings must be positive");
    if (dt > dx * (1.0 + 1e-12))
        throw std::invalid_argument("Lattice: CFL condition dt <= dx violated (dt/dx = " + std::to_string(dt / dx) +
                                    ")");
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(const Lattice& lat, SiteField<double> values, std::vector<ScalarMode> modes, bool analytic)
    : lat_(lat), values_(std::move(values)), modes_(std::move(modes)), analytic_(analytic) {}

ScalarField::ScalarField(const Lattice& lat, std::vector<ScalarMode> modes)
    : lat_(lat), values_(lat), modes_(std::move(modes)), analytic_(true) {
    for (const auto& m : modes_)
        if (m.direction != 1 && m.direction != -1)
            throw std::invalid_argument("ScalarMode: direction must be +1 or -1");
    for (int n = 0; n < lat.nt; ++n)
        for (int i = 0; i < lat.nx; ++i) values_(n, i) = jet_at(lat.time(n), lat.position(i)).value;
}

ScalarField ScalarField::sampled(const Lattice& lat, SiteField<double> values) {
    if (values.nt() != lat.nt || values.nx() != lat.nx) throw std::invalid_argument("ScalarField: shape mismatch");
    return ScalarField(lat, std::move(values), {}, false);
}

ScalarJet ScalarField::jet_at(double t, double x) const {
    if (!analytic_) throw std::logic_error("ScalarField: no analytic derivative data for a sampled field");
    ScalarJet j;
    for (const auto& m : modes_) {
        const double th = m.wavenumber * (x - m.direction * t) + m.phase;
        const double c = std::cos(th);
        const double s = std::sin(th);
        j.value += m.amplitude * c;
        j.dt += m.amplitude * m.wavenumber * m.direction * s;
        j.dx -= m.amplitude * m.wavenumber * s;
    }
    return j;
}

ScalarJet ScalarField::jet(int n, int i) const { return jet_at(lat_.time(n), lat_.position(i)); }

ScalarField harmonic_scalar(const Lattice& lat, std::vector<ScalarMode> modes) {
    for (const auto& m : modes) {
        const double cycles = m.wavenumber * lat.length() / (2.0 * kPi);
        if (std::abs(cycles - std::round(cycles)) > 1e-9 * std::max(1.0, std::abs(cycles)))
            throw std::invalid_argument("harmonic_scalar: wavenumber " + std::to_string(m.wavenumber) +
                                        " is not commensurate with the periodic box of length " +
                                        std::to_string(lat.length()));
    }
    return ScalarField(lat, std::move(modes));
}

ScalarField standing_wave(const Lattice& lat, double amplitude, int harmonic) {
    const double k = 2.0 * kPi * harmonic / lat.length();
    return harmonic_scalar(lat, {{0.5 * amplitude, k, 1, 0.0}, {0.5 * amplitude, k, -1, 0.0}});
}

// ---------------------------------------------------------------------------

double LatticeQubitField::max_algebra_residual() const {
    std::vector<double> r(q.size());
    parallel_for(q.size(), [&](std::size_t k) { r[k] = verify_triple(q.at(k)).residual; });
    double m = 0.0;
    for (double x : r) m = std::max(m, x);
    return m;
}

OperatorTriple ansatz_triple(double phi) {
    const auto& p = pauli_products();
    const double c = std::cos(kPi * phi);
    const double s = std::sin(kPi * phi);
    OperatorTriple q;
    for (int j = 0; j < 3; ++j) q[j] = 0.5 * ((1.0 - c) * p.right[j] + (1.0 + c) * p.left[j] - s * p.eps[j]);
    return q;
}

OperatorTriple ansatz_prime(double phi) {
    const auto& p = pauli_products();
    const double c = std::cos(kPi * phi);
    const double s = std::sin(kPi * phi);
    OperatorTriple q;
    for (int j = 0; j < 3; ++j) q[j] = (0.5 * kPi) * (s * (p.right[j] - p.left[j]) - c * p.eps[j]);
    return q;
}

OperatorTriple ansatz_second(double phi) {
    const auto& p = pauli_products();
    const double c = std::cos(kPi * phi);
    const double s = std::sin(kPi * phi);
    OperatorTriple q;
    for (int j = 0; j < 3; ++j) q[j] = (0.5 * kPi * kPi) * (c * (p.right[j] - p.left[j]) + s * p.eps[j]);
    return q;
}

LatticeQubitField ansatz_field(const ScalarField& phi) {
    const Lattice& lat = phi.lattice();
    LatticeQubitField f{lat, TripleField(lat), 4};
    parallel_for(lat.sites(), [&](std::size_t k) {
        const int n = static_cast<int>(k) / lat.nx;
        const int i = static_cast<int>(k) % lat.nx;
        f.q(n, i) = ansatz_triple(phi(n, i));
    });
    return f;
}

TripleDerivatives ansatz_derivatives(const ScalarField& phi) {
    const Lattice& lat = phi.lattice();
    TripleDerivatives d{TripleField(lat), TripleField(lat), TripleField(lat), 0};
    parallel_for(lat.sites(), [&](std::size_t k) {
        const int n = static_cast<int>(k) / lat.nx;
        const int i = static_cast<int>(k) % lat.nx;
        const ScalarJet j = phi.jet(n, i);
        const OperatorTriple q1 = ansatz_prime(j.value);
        const OperatorTriple q2 = ansatz_second(j.value);
        d.dt(n, i) = j.dt * q1;
        d.dx(n, i) = j.dx * q1;
        d.box(n, i) = j.box * q1 + (j.dt * j.dt - j.dx * j.dx) * q2;
    });
    return d;
}

TripleField analytic_box_ansatz(const ScalarField& phi) { return ansatz_derivatives(phi).box; }

TripleDerivatives fd_derivatives(const LatticeQubitField& f) {
    const Lattice& lat = f.lattice;
    return {central_dt(lat, f.q), central_dx(lat, f.q, 1), dalembertian(lat, f.q), 1};
}

// ---------------------------------------------------------------------------

ResidualStats SiteResiduals::stats() const {
    ResidualStats s;
    double sq = 0.0;
    for (int n = time_margin; n < norm.nt() - time_margin; ++n)
        for (int i = 0; i < norm.nx(); ++i) {
            const double v = norm(n, i);
            s.max = std::max(s.max, v);
            sq += v * v;
            ++s.sites;
        }
    s.rms = s.sites ? std::sqrt(sq / double(s.sites)) : 0.0;
    return s;
}

namespace {

/// Runs f(n, i) -> double over the valid slices in parallel.
template <class F>
SiteResiduals per_site(const Lattice& lat, int margin, F&& f) {
    SiteResiduals r{SiteField<double>(lat), margin};
    const int rows = lat.nt - 2 * margin;
    if (rows <= 0) return r;
    parallel_for(static_cast<std::size_t>(rows) * lat.nx, [&](std::size_t k) {
        const int n = margin + static_cast<int>(k) / lat.nx;
        const int i = static_cast<int>(k) % lat.nx;
        r.norm(n, i) = f(n, i);
    });
    return r;
}

} // namespace

// ---------------------------------------------------------------------------

GaugeField gauge_potential(const ScalarField& phi) {
    const Lattice& lat = phi.lattice();
    GaugeField g{MatrixField(lat), MatrixField(lat), MatrixField(lat)};
    const Matrix pm = singlet_projector();
    parallel_for(lat.sites(), [&](std::size_t k) {
        const int n = static_cast<int>(k) / lat.nx;
        const int i = static_cast<int>(k) % lat.nx;
        const ScalarJet j = phi.jet(n, i);
        g.u(n, i) = swap_power(j.value);
        g.jt(n, i) = (-kPi * j.dt) * pm;
        g.jx(n, i) = (-kPi * j.dx) * pm;
    });
    return g;
}

GaugeChecks gauge_checks(const ScalarField& phi, const GaugeField& g, const LatticeQubitField& q,
                         const TripleDerivatives& d) {
    const Lattice& lat = phi.lattice();
    const auto& p = pauli_products();
    GaugeChecks c;
    const Matrix one = Matrix::Identity(4, 4);
    for (std::size_t k = 0; k < lat.sites(); ++k) {
        const Matrix& u = g.u.at(k);
        c.unitarity = std::max(c.unitarity, (u.adjoint() * u - one).norm());
        for (int j = 0; j < 3; ++j)
            c.reconstruction = std::max(c.reconstruction, (u.adjoint() * p.left[j] * u - q.q.at(k)[j]).norm());
        c.commutator_max = std::max(c.commutator_max, commutator(g.jt.at(k), g.jx.at(k)).norm());
    }

    c.potential_derivative = per_site(lat, d.time_margin, [&](int n, int i) {
                 double s = 0.0;
                 for (int j = 0; j < 3; ++j) {
                     const Matrix& qj = q.q(n, i)[j];
                     s += (d.dt(n, i)[j] - kI * commutator(g.jt(n, i), qj)).squaredNorm();
                     s += (d.dx(n, i)[j] - kI * commutator(g.jx(n, i), qj)).squaredNorm();
                 }
                 return std::sqrt(s);
             }).stats();

    const MatrixField djt_dx = central_dx(lat, g.jt, 1);
    const MatrixField djx_dt = central_dt(lat, g.jx);
    c.flatness = per_site(lat, 1, [&](int n, int i) {
                 const Matrix lhs = commutator(g.jt(n, i), g.jx(n, i));
                 return (lhs - kI * (djt_dx(n, i) - djx_dt(n, i))).norm();
             }).stats();
    return c;
}

HamiltonianField hamiltonian_field(const LatticeQubitField& q, const TripleDerivatives& d) {
    const Lattice& lat = q.lattice;
    HamiltonianField h{MatrixField(lat), MatrixField(lat), d.time_margin, 0.0};
    std::vector<double> asym(lat.sites(), 0.0);
    const Complex pre(0.0, -0.25);
    parallel_for(lat.sites(), [&](std::size_t k) {
        const int n = static_cast<int>(k) / lat.nx;
        if (n < d.time_margin || n >= lat.nt - d.time_margin) return;
        const OperatorTriple& qq = q.q.at(k);
        Matrix ht = Matrix::Zero(qq[0].rows(), qq[0].cols());
        Matrix hx = ht;
        for (int j = 0; j < 3; ++j) {
            ht += d.dt.at(k)[j] * qq[j];
            hx += d.dx.at(k)[j] * qq[j];
        }
        ht *= pre;
        hx *= pre;
        asym[k] = std::max((ht - ht.adjoint()).norm(), (hx - hx.adjoint()).norm());
        h.ht.at(k) = 0.5 * (ht + ht.adjoint());
        h.hx.at(k) = 0.5 * (hx + hx.adjoint());
    });
    for (double a : asym) h.max_asymmetry = std::max(h.max_asymmetry, a);
    return h;
}

HamiltonianChecks hamiltonian_checks(const LatticeQubitField& q, const TripleDerivatives& d,
                                     const HamiltonianField& h) {
    const Lattice& lat = q.lattice;
    const int margin = std::max(d.time_margin, h.time_margin);
    HamiltonianChecks c;
    c.hamiltonian_derivative = per_site(lat, margin, [&](int n, int i) {
                 double s = 0.0;
                 for (int j = 0; j < 3; ++j) {
                     const Matrix& qj = q.q(n, i)[j];
                     s += (d.dt(n, i)[j] - kI * commutator(h.ht(n, i), qj)).squaredNorm();
                     s += (d.dx(n, i)[j] - kI * commutator(h.hx(n, i), qj)).squaredNorm();
                 }
                 return std::sqrt(s);
             }).stats();
    c.commutant = per_site(lat, margin, [&](int n, int i) {
                      const QubitTriple t = q.triple(n, i);
                      return std::hypot(project_commutant(t, h.ht(n, i)).norm(),
                                        project_commutant(t, h.hx(n, i)).norm());
                  }).stats();
    return c;
}

// ---------------------------------------------------------------------------

SiteResiduals eom_residual(const LatticeQubitField& q, const TripleField& box, int time_margin,
                           const EomSpec& spec) {
    return per_site(q.lattice, time_margin, [&](int n, int i) {
        const QubitTriple t = q.triple(n, i);
        OperatorTriple r = omega_combination(spec.lambda, t, box(n, i));
        if (spec.mu != 0.0) r += spec.mu * q.q(n, i);
        return triple_norm(r);
    });
}

TypeOneNoGo type1_nogo(const LatticeQubitField& q, const TripleField& box, int time_margin) {
    const Lattice& lat = q.lattice;
    double qb = 0.0, qq = 0.0, bb = 0.0;
    for (int n = time_margin; n < lat.nt - time_margin; ++n)
        for (int i = 0; i < lat.nx; ++i) {
            qb += inner(q.q(n, i), box(n, i)).real();
            qq += inner(q.q(n, i), q.q(n, i)).real();
            bb += inner(box(n, i), box(n, i)).real();
        }
    TypeOneNoGo r;
    r.box_norm = std::sqrt(bb);
    if (bb == 0.0) return r;
    r.best_mu = -qb / qq;
    // ||B + mu q||^2 = bb + 2 mu qb + mu^2 qq
    const double min_sq = std::max(0.0, bb + 2.0 * r.best_mu * qb + r.best_mu * r.best_mu * qq);
    r.ratio = std::sqrt(min_sq / bb);
    return r;
}

SiteResiduals first_derivative_identity_residual(const LatticeQubitField& q, const TripleDerivatives& d) {
    return per_site(q.lattice, d.time_margin, [&](int n, int i) {
        const OperatorTriple& qq = q.q(n, i);
        const OperatorTriple& at = d.dt(n, i);
        const OperatorTriple& ax = d.dx(n, i);
        const OperatorTriple& b = d.box(n, i);
        double worst = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                Matrix rhs = -(b[j] * qq[k]) - qq[j] * b[k];
                for (int l = 0; l < 3; ++l)
                    if (const int e = levi_civita(j, k, l)) rhs += (kI * double(e)) * b[l];
                const Matrix lhs = at[j] * at[k] - ax[j] * ax[k];
                worst = std::max(worst, (lhs - 0.5 * rhs).norm());
            }
        return worst;
    });
}

OperatorTriple eq35_explicit(const QubitTriple& t, const OperatorTriple& b) {
    OperatorTriple e;
    for (int j = 0; j < 3; ++j) {
        e[j] = Matrix::Zero(b[j].rows(), b[j].cols());
        for (int k = 0; k < 3; ++k) {
            const Matrix inner_comm = 0.5 * (commutator(t[k], b[j]) - commutator(t[j], b[k]));
            e[j] += anticommutator(t[k], inner_comm);
        }
    }
    return e;
}

namespace {
const SuperOpCoeffs kDivergenceCombo = [] {
    SuperOpCoeffs c;
    c[2] = 1.0;
    c[5] = 1.0;
    return c;
}();
} // namespace

Eq35Constant eq35_constant(const QubitTriple& t, Rng& rng, int samples) {
    Complex xe = 0.0;
    double xx = 0.0, ee = 0.0;
    std::vector<std::pair<OperatorTriple, OperatorTriple>> pairs;
    for (int s = 0; s < samples; ++s) {
        const OperatorTriple b = random_hermitian_triple(t.dim(), rng);
        OperatorTriple x = omega_combination(kDivergenceCombo, t, b);
        OperatorTriple e = eq35_explicit(t, b);
        xe += inner(x, e);
        xx += inner(x, x).real();
        ee += inner(e, e).real();
        pairs.emplace_back(std::move(x), std::move(e));
    }
    Eq35Constant c;
    c.kappa = xx > 0.0 ? xe / xx : Complex(0.0);
    double res = 0.0;
    for (const auto& [x, e] : pairs) {
        const double r = triple_norm(e - c.kappa * x);
        res += r * r;
    }
    c.misfit = ee > 0.0 ? std::sqrt(res / ee) : 0.0;
    return c;
}

Eq35Report eq35_equivalence(const LatticeQubitField& q, const TripleField& box, int time_margin, Rng& rng) {
    const Lattice& lat = q.lattice;
    Eq35Report r;
    const auto k = eq35_constant(q.triple(time_margin, 0), rng);
    r.kappa = k.kappa;
    r.kappa_misfit = k.misfit;
    r.explicit_form = per_site(lat, time_margin, [&](int n, int i) {
        return triple_norm(eq35_explicit(q.triple(n, i), box(n, i)));
    });
    r.superop_form = per_site(lat, time_margin, [&](int n, int i) {
        return triple_norm(omega_combination(kDivergenceCombo, q.triple(n, i), box(n, i)));
    });
    r.difference = per_site(lat, time_margin, [&](int n, int i) {
        const QubitTriple t = q.triple(n, i);
        return triple_norm(eq35_explicit(t, box(n, i)) - r.kappa * omega_combination(kDivergenceCombo, t, box(n, i)));
    });
    return r;
}

double convergence_order(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size() || h.size() < 2)
        throw std::invalid_argument("convergence_order: need at least two (h, err) pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = double(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (!(h[k] > 0.0) || !(err[k] > 0.0))
            throw std::invalid_argument("convergence_order: spacings and errors must be positive");
        const double x = std::log(h[k]);
        const double y = std::log(err[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

LatticeQubitField rotated_pauli_field(const Lattice& lat, Rng& rng) {
    const auto& p = pauli_products();
    std::array<Matrix, 3> vecs;
    std::array<Eigen::VectorXd, 3> vals;
    for (int j = 0; j < 3; ++j) {
        Matrix k = random_hermitian(4, rng);
        k /= k.norm();
        Eigen::SelfAdjointEigenSolver<Matrix> es(k);
        vecs[j] = es.eigenvectors();
        vals[j] = es.eigenvalues();
    }
    const double kw = 2.0 * kPi / lat.length();
    LatticeQubitField f{lat, TripleField(lat), 4};
    for (int n = 0; n < lat.nt; ++n)
        for (int i = 0; i < lat.nx; ++i) {
            const double t = lat.time(n), x = lat.position(i);
            OperatorTriple q;
            for (int j = 0; j < 3; ++j) {
                const double a = (1.0 + 0.5 * j) * std::cos(kw * (x - t) + j) + 0.4 * std::sin(kw * (x + t) - j);
                Eigen::VectorXcd ph(4);
                for (int r = 0; r < 4; ++r) ph[r] = std::exp(kI * (a * vals[j][r]));
                const Matrix v = vecs[j] * ph.asDiagonal() * vecs[j].adjoint();
                q[j] = v.adjoint() * p.left[j] * v;
            }
            f.q(n, i) = std::move(q);
        }
    return f;
}

// ---------------------------------------------------------------------------

void write_snapshot(std::ostream& os, const LatticeQubitField& f) {
    const Lattice& lat = f.lattice;
    os << "lattice " << lat.nt << ' ' << lat.nx << ' ' << std::setprecision(17) << lat.dt << ' ' << lat.dx << ' '
       << f.dim << '\n';
    for (int n = 0; n < lat.nt; ++n)
        for (int i = 0; i < lat.nx; ++i)
            for (int j = 0; j < 3; ++j) {
                os << n << ' ' << i << ' ' << j + 1 << '\n';
                write_matrix(os, f.q(n, i)[j]);
            }
}

LatticeQubitField read_snapshot(std::istream& is) {
    std::string tag;
    int nt = 0, nx = 0;
    double dt = 0.0, dx = 0.0;
    std::size_t dim = 0;
    if (!(is >> tag >> nt >> nx >> dt >> dx >> dim) || tag != "lattice")
        throw std::runtime_error("read_snapshot: missing or malformed `lattice` header");
    LatticeQubitField f{Lattice(nt, nx, dt, dx), TripleField(nt, nx), dim};
    for (int n = 0; n < nt; ++n)
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < 3; ++j) {
                int rn = -1, ri = -1, rj = -1;
                if (!(is >> rn >> ri >> rj) || rn != n || ri != i || rj != j + 1)
                    throw std::runtime_error("read_snapshot: expected record `" + std::to_string(n) + " " +
                                             std::to_string(i) + " " + std::to_string(j + 1) + "`");
                Matrix m = read_matrix(is);
                if (m.rows() != static_cast<Eigen::Index>(dim) || m.cols() != m.rows())
                    throw std::runtime_error("read_snapshot: matrix has the wrong shape");
                f.q(n, i)[j] = std::move(m);
            }
    return f;
}

} // namespace qubitfield
