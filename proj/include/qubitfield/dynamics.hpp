#pragma once

#include "qubitfield/field_lattice.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace qubitfield {

/// One constant-t slice: a triple of N x N matrices per spatial site.
using Slice = std::vector<OperatorTriple>;

struct CflViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Leapfrog stability for (box + mu) q = 0: dt^2 (4 / dx^2 + mu) <= 4 and
/// dt <= dx. Throws CflViolation.
void check_cfl(double dt, double dx, double mu);

/// q[n+1] = 2 q[n] - q[n-1] + dt^2 (d_xx q[n] - mu q[n]), entrywise. Every
/// update is a real linear combination, so Hermitian data stays Hermitian.
class LeapfrogStepper {
public:
    LeapfrogStepper(double dt, double dx, double mu, Slice previous, Slice current);

    void step();
    /// Exchanges the two stored slices so further steps run backwards in time.
    void reverse();

    const Slice& previous() const { return prev_; }
    const Slice& current() const { return cur_; }
    long index() const { return index_; }
    double dt() const { return dt_; }
    double dx() const { return dx_; }

private:
    double dt_, dx_, mu_;
    Slice prev_, cur_, next_;
    long index_ = 1;
};

struct Trajectory {
    double dt = 0.0;
    double dx = 0.0;
    std::vector<Slice> slices; ///< slices[n] at time n dt
};

/// Runs `steps` leapfrog steps from slices at t = 0 and t = dt.
Trajectory evolve_type1(double dt, double dx, const Slice& q0, const Slice& q1, double mu, int steps);

/// (q[n+1] - q[n-1]) / (2 dt)
Slice centered_velocity(const Slice& before, const Slice& after, double dt);

/// E = (i/8) sum_x dx (q_j d_t q_j - d_t q_j q_j)
Matrix energy_charge(const Slice& q, const Slice& qdot, double dx);

struct Type7Charge {
    OperatorTriple omega2; ///< sum_x dx Omega^(2) d_t q_j
    OperatorTriple omega5; ///< sum_x dx Omega^(5) d_t q_j
    double difference = 0.0; ///< ||omega2 - omega5||
};

/// The super-operators act with the triple at each site.
Type7Charge type7_charge(const Slice& q, const Slice& qdot, double dx);

/// Largest ||A - A^dagger|| over a slice.
double slice_hermiticity_defect(const Slice& s);
/// Largest verify_triple residual over a slice.
double slice_algebra_residual(const Slice& s);

/// q(t, x) = C + sum_m A_m cos(k_m x - w_m t) + B_m sin(k_m x - w_m t)
/// with Hermitian coefficient triples, k_m = 2 pi m / L and w_m^2 = k_m^2 + mu.
/// Odd m move right, even m move left. C is only present for mu = 0.
class PlaneWaveSolution {
public:
    PlaneWaveSolution(std::size_t n, double length, double mu, int modes, Rng& rng);

    double length() const { return length_; }
    double mu() const { return mu_; }
    OperatorTriple value(double t, double x) const;
    OperatorTriple velocity(double t, double x) const;
    Slice value_slice(double t, int nx) const;
    Slice velocity_slice(double t, int nx) const;

    /// Continuum charge, by periodic trapezoid quadrature (exact for the
    /// trigonometric integrand once the node count exceeds the bandwidth).
    Matrix exact_energy_charge(int nodes = 512) const;

private:
    struct Mode {
        double k, w;
        OperatorTriple a, b;
    };
    std::size_t n_;
    double length_, mu_;
    OperatorTriple c_;
    std::vector<Mode> modes_;
};

struct ConservationRun {
    int nx = 0;
    double dx = 0.0;
    double dt = 0.0;
    int steps = 0;
    double drift_vs_exact = 0.0;   ///< max_n ||E[n] - E_exact|| / ||E_exact||
    double internal_drift = 0.0;   ///< max_n ||E[n] - E[1]|| / ||E_exact||
    double hermiticity = 0.0;      ///< largest Hermiticity defect of any slice
    double algebra_residual = 0.0; ///< largest verify_triple residual of the final slice
};

/// Evolves the plane-wave solution from exact data on nx sites for the given
/// physical duration; `observer` (optional) sees every step index, time and
/// charge.
ConservationRun run_conservation(const PlaneWaveSolution& sol, int nx, double courant, double duration,
                                 const std::function<void(long, double, const Matrix&)>& observer = {});

/// max over sites of ||q_back - q_initial|| after `steps` forward and
/// `steps` backward leapfrog steps.
double time_reversal_error(const PlaneWaveSolution& sol, int nx, double courant, int steps);

struct DivergenceCheck {
    SiteResiduals first;  ///< (d_mu q_j q_j)^{;mu} - (box q_j q_j - q_j box q_j) / 2
    SiteResiduals second; ///< (eps_jkl q_j d_mu q_k q_l)^{;mu}
};

/// The two divergence identities; the divergences are central differences of
/// currents built from `d` (margin grows by one).
DivergenceCheck divergence_identity_check(const LatticeQubitField& q, const TripleDerivatives& d);

} // namespace qubitfield
