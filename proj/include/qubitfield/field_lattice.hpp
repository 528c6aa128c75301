#pragma once

#include "qubitfield/eom_classifier.hpp"
#include "qubitfield/operator_core.hpp"
#include "qubitfield/random_ops.hpp"

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace qubitfield {

/// Flat 1+1 lattice, periodic in x, c = 1. Metric (+,-): box = d_t^2 - d_x^2.
struct Lattice {
    int nt;
    int nx;
    double dt;
    double dx;

    /// Throws std::invalid_argument unless nt, nx >= 4, dt, dx > 0 and dt <= dx.
    Lattice(int nt, int nx, double dt, double dx);

    double length() const { return nx * dx; }
    double time(int n) const { return n * dt; }
    double position(int i) const { return i * dx; }
    int wrap(int i) const { return ((i % nx) + nx) % nx; }
    std::size_t sites() const { return static_cast<std::size_t>(nt) * static_cast<std::size_t>(nx); }
};

template <class T>
class SiteField {
public:
    SiteField() = default;
    SiteField(int nt, int nx, const T& init = T{})
        : nt_(nt), nx_(nx), data_(static_cast<std::size_t>(nt) * nx, init) {}
    explicit SiteField(const Lattice& lat, const T& init = T{}) : SiteField(lat.nt, lat.nx, init) {}

    int nt() const { return nt_; }
    int nx() const { return nx_; }
    const T& operator()(int n, int i) const { return data_[index(n, i)]; }
    T& operator()(int n, int i) { return data_[index(n, i)]; }
    const T& at(std::size_t k) const { return data_[k]; }
    T& at(std::size_t k) { return data_[k]; }
    std::size_t size() const { return data_.size(); }

private:
    std::size_t index(int n, int i) const { return static_cast<std::size_t>(n) * nx_ + i; }
    int nt_ = 0;
    int nx_ = 0;
    std::vector<T> data_;
};

using TripleField = SiteField<OperatorTriple>;
using MatrixField = SiteField<Matrix>;

// ---------------------------------------------------------------------------
// Finite differences. Time slices closer than `margin` to either end are not
// written (no ghost cells); x is periodic.

template <class T>
SiteField<T> central_dt(const Lattice& lat, const SiteField<T>& f, int margin = 0) {
    SiteField<T> out(lat);
    const double s = 0.5 / lat.dt;
    for (int n = margin + 1; n < lat.nt - margin - 1; ++n)
        for (int i = 0; i < lat.nx; ++i) out(n, i) = s * (f(n + 1, i) - f(n - 1, i));
    return out;
}

template <class T>
SiteField<T> central_dx(const Lattice& lat, const SiteField<T>& f, int margin = 0) {
    SiteField<T> out(lat);
    const double s = 0.5 / lat.dx;
    for (int n = margin; n < lat.nt - margin; ++n)
        for (int i = 0; i < lat.nx; ++i) out(n, i) = s * (f(n, lat.wrap(i + 1)) - f(n, lat.wrap(i - 1)));
    return out;
}

/// box F = (F[t+1] - 2F + F[t-1]) / dt^2 - (F[x+1] - 2F + F[x-1]) / dx^2 on
/// interior time slices.
template <class T>
SiteField<T> dalembertian(const Lattice& lat, const SiteField<T>& f) {
    if (f.nt() != lat.nt || f.nx() != lat.nx) throw std::invalid_argument("dalembertian: shape mismatch");
    SiteField<T> out(lat);
    const double it2 = 1.0 / (lat.dt * lat.dt);
    const double ix2 = 1.0 / (lat.dx * lat.dx);
    for (int n = 1; n < lat.nt - 1; ++n)
        for (int i = 0; i < lat.nx; ++i) {
            const T& c = f(n, i);
            out(n, i) = it2 * (f(n + 1, i) + f(n - 1, i) - 2.0 * c) -
                        ix2 * (f(n, lat.wrap(i + 1)) + f(n, lat.wrap(i - 1)) - 2.0 * c);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Scalar fields.

/// a cos(k (x - direction t) + phase); direction is +1 (right-mover) or -1.
struct ScalarMode {
    double amplitude = 0.0;
    double wavenumber = 0.0;
    int direction = 1;
    double phase = 0.0;
};

struct ScalarJet {
    double value = 0.0;
    double dt = 0.0;
    double dx = 0.0;
    double box = 0.0;
};

class ScalarField {
public:
    /// Samples a sum of modes; each mode is an exact solution of box phi = 0.
    ScalarField(const Lattice& lat, std::vector<ScalarMode> modes);
    /// Plain samples without derivative data.
    static ScalarField sampled(const Lattice& lat, SiteField<double> values);

    const Lattice& lattice() const { return lat_; }
    double operator()(int n, int i) const { return values_(n, i); }
    const SiteField<double>& values() const { return values_; }

    bool has_jet() const { return analytic_; }
    const std::vector<ScalarMode>& modes() const { return modes_; }
    /// Value and exact derivatives at a lattice site; throws std::logic_error
    /// when the field carries no analytic data.
    ScalarJet jet(int n, int i) const;
    ScalarJet jet_at(double t, double x) const;

private:
    ScalarField(const Lattice& lat, SiteField<double> values, std::vector<ScalarMode> modes, bool analytic);
    Lattice lat_;
    SiteField<double> values_;
    std::vector<ScalarMode> modes_;
    bool analytic_ = false;
};

/// Checks that every wavenumber is a multiple of 2 pi / L (std::invalid_argument
/// otherwise) and samples the mode sum.
ScalarField harmonic_scalar(const Lattice& lat, std::vector<ScalarMode> modes);

/// a cos(k x) cos(k t) with k = 2 pi harmonic / L.
ScalarField standing_wave(const Lattice& lat, double amplitude, int harmonic);

// ---------------------------------------------------------------------------
// Qubit fields.

struct LatticeQubitField {
    Lattice lattice;
    TripleField q;
    std::size_t dim = 0;

    /// Largest verify_triple residual over all sites.
    double max_algebra_residual() const;
    QubitTriple triple(int n, int i) const { return QubitTriple::unchecked(q(n, i)); }
};

/// q_j(phi) = ((1 - cos pi phi) 1 (x) s_j + (1 + cos pi phi) s_j (x) 1 - sin pi phi eps_jkl s_k (x) s_l) / 2
OperatorTriple ansatz_triple(double phi);
/// d q_j / d phi
OperatorTriple ansatz_prime(double phi);
/// d^2 q_j / d phi^2
OperatorTriple ansatz_second(double phi);

LatticeQubitField ansatz_field(const ScalarField& phi);

struct TripleDerivatives {
    TripleField dt;
    TripleField dx;
    TripleField box;
    /// slices [margin, nt - margin) carry valid data
    int time_margin = 0;
};

/// Closed forms: d_mu q = q' d_mu phi, box q = q' box phi + q'' (phi_t^2 - phi_x^2).
TripleDerivatives ansatz_derivatives(const ScalarField& phi);
TripleField analytic_box_ansatz(const ScalarField& phi);

/// Central differences of a sampled field (margin 1).
TripleDerivatives fd_derivatives(const LatticeQubitField& f);

// ---------------------------------------------------------------------------

struct ResidualStats {
    double max = 0.0;
    double rms = 0.0;
    std::size_t sites = 0;
};

/// Per-site residual norms over the slices [margin, nt - margin).
struct SiteResiduals {
    SiteField<double> norm;
    int time_margin = 0;
    ResidualStats stats() const;
};

// ---------------------------------------------------------------------------
// Gauge potential and Hamiltonian field.

struct GaugeField {
    MatrixField u;  ///< W^phi
    MatrixField jt; ///< J_t = -pi phi_t P_-
    MatrixField jx;
};

GaugeField gauge_potential(const ScalarField& phi);

struct GaugeChecks {
    double unitarity = 0.0;       ///< max ||U^dagger U - 1||
    double reconstruction = 0.0;  ///< max ||U^dagger (s_j (x) 1) U - q_j||
    ResidualStats potential_derivative;           ///< ||d_mu q - i [J_mu, q]||, both mu
    ResidualStats flatness;           ///< ||[J_t, J_x] - i (d_x J_t - d_t J_x)||
    double commutator_max = 0.0;  ///< max ||[J_t, J_x]||
};

GaugeChecks gauge_checks(const ScalarField& phi, const GaugeField& g, const LatticeQubitField& q,
                         const TripleDerivatives& d);

struct HamiltonianField {
    MatrixField ht;
    MatrixField hx;
    int time_margin = 0;
    double max_asymmetry = 0.0; ///< largest ||H - H^dagger|| before symmetrization
};

/// H_mu = -(i/4) d_mu q_j q_j, symmetrized.
HamiltonianField hamiltonian_field(const LatticeQubitField& q, const TripleDerivatives& d);

struct HamiltonianChecks {
    ResidualStats hamiltonian_derivative;      ///< ||d_mu q - i [H_mu, q]||
    ResidualStats commutant; ///< ||Pi(H_t)|| and ||Pi(H_x)||
};

HamiltonianChecks hamiltonian_checks(const LatticeQubitField& q, const TripleDerivatives& d,
                                     const HamiltonianField& h);

// ---------------------------------------------------------------------------
// Equations of motion and identities.

/// ||lambda_a Omega^(a) box q_j + mu q_j|| per site.
SiteResiduals eom_residual(const LatticeQubitField& q, const TripleField& box, int time_margin,
                           const EomSpec& spec);

/// min over mu of ||(box + mu) q|| / ||box q|| over the valid sites.
struct TypeOneNoGo {
    double best_mu = 0.0;
    double ratio = 0.0;
    double box_norm = 0.0;
};
TypeOneNoGo type1_nogo(const LatticeQubitField& q, const TripleField& box, int time_margin);

/// d^mu q_j d_mu q_k - (i eps_jkl box q_l - box q_j q_k - q_j box q_k) / 2,
/// largest over (j, k).
SiteResiduals first_derivative_identity_residual(const LatticeQubitField& q, const TripleDerivatives& d);

/// E_j = sum_k {q_k, ([q_k, B_j] - [q_j, B_k]) / 2}
OperatorTriple eq35_explicit(const QubitTriple& t, const OperatorTriple& b);

/// Least-squares constant kappa with eq35_explicit = kappa (Omega^(2) + Omega^(5)) B
/// over random B at the given triple.
struct Eq35Constant {
    Complex kappa;
    double misfit = 0.0; ///< relative residual of the fit
};
Eq35Constant eq35_constant(const QubitTriple& t, Rng& rng, int samples = 8);

struct Eq35Report {
    Complex kappa;
    double kappa_misfit = 0.0;
    SiteResiduals explicit_form;
    SiteResiduals superop_form;
    SiteResiduals difference; ///< ||E - kappa (Omega^(2) + Omega^(5)) box q||
};
Eq35Report eq35_equivalence(const LatticeQubitField& q, const TripleField& box, int time_margin, Rng& rng);

/// Least-squares slope of log(err) against log(h).
double convergence_order(const std::vector<double>& h, const std::vector<double>& err);

/// q_j = V_j^dagger (s_j (x) 1) V_j with three independent smooth unitaries
/// V_j = exp(i a(t,x) K_j). Each q_j squares to one but the triple breaks the
/// cross relations of the algebra.
LatticeQubitField rotated_pauli_field(const Lattice& lat, Rng& rng);

// ---------------------------------------------------------------------------
// Field snapshots: a header `lattice nt nx dt dx N`, then for every site and
// j = 1..3 a line `t x j` followed by the matrix dump of q_j.

void write_snapshot(std::ostream& os, const LatticeQubitField& f);
/// Throws std::runtime_error on malformed input.
LatticeQubitField read_snapshot(std::istream& is);

} // namespace qubitfield
