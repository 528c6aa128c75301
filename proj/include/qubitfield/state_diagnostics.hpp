#pragma once

#include "qubitfield/field_lattice.hpp"
#include "qubitfield/operator_core.hpp"
#include "qubitfield/random_ops.hpp"

#include <array>
#include <string>

namespace qubitfield {

/// Hermitian, positive semidefinite (eigenvalues >= -1e-12), unit trace.
class DensityOperator {
public:
    /// Throws std::invalid_argument when an invariant fails.
    explicit DensityOperator(Matrix rho, double tol = 1e-12);

    const Matrix& matrix() const { return rho_; }
    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }

    static DensityOperator maximally_mixed(std::size_t n);
    static DensityOperator pure(const Eigen::VectorXcd& psi);

private:
    Matrix rho_;
};

/// Tr(A rho). A must be Hermitian (std::invalid_argument otherwise); an
/// imaginary part above 1e-12 is a logic error.
double expectation(const DensityOperator& rho, const Matrix& a);

struct LocalDensity {
    Matrix rho_local;                 ///< (1 + m_j q_j) / 2
    std::array<double, 3> bloch{};    ///< m_j = <q_j>
    double trace = 0.0;               ///< always N / 2
    double observable_check = 0.0;    ///< worst |Tr(A rho_l)/Tr(rho_l) - <A>| over the probe set
};

/// Builds the local density operator and checks, for a0 1 + a_j q_j with
/// (a0, a) running over the unit vectors and (1, 1, 1, 1), that
/// Tr(A rho_l) / Tr(rho_l) reproduces <A>.
LocalDensity local_density(const DensityOperator& rho, const QubitTriple& t);

struct Witness {
    Matrix d;
    double norm = 0.0; ///< Frobenius
};

/// D = 3 rho - q_j rho q_j - ({q_j, rho} + i eps_jkl q_l rho q_k) Tr(rho q_j)
Witness entanglement_witness(const DensityOperator& rho, const QubitTriple& t);
Witness entanglement_witness(const Matrix& rho, const QubitTriple& t);

inline constexpr double kDefaultEntanglementThreshold = 1e-8;

/// max_j |n^t <[H_t, q_j]> + n^x <[H_x, q_j]>| with the (+,-) metric, so
/// n^mu H_mu = n^t H_t + n^x H_x for upper-index n.
double stationarity_check(const DensityOperator& rho, const Matrix& ht, const Matrix& hx, const QubitTriple& t,
                          const std::array<double, 2>& n);

struct DTraceCheck {
    bool refused = false;
    std::string diagnostic;
    double witness_norm = 0.0;
    /// Tr(q_m dD) with the coefficients Tr(rho q_j) frozen at the probed site
    std::array<Complex, 3> lhs{};
    /// 4 i <[H_mu, q_m]>
    std::array<Complex, 3> rhs{};
    /// Tr(q_m dD) with D recomputed in full at the neighbours
    std::array<Complex, 3> lhs_full{};
    double max_difference = 0.0;
    double max_magnitude = 0.0;
};

/// Central difference of D along direction mu (0 = t, 1 = x) at an interior
/// site. Refuses (with diagnostic) unless ||D|| <= threshold at the site.
DTraceCheck dtrace_identity_check(const DensityOperator& rho, const LatticeQubitField& q, const HamiltonianField& h,
                                  int n, int i, int mu, double threshold = kDefaultEntanglementThreshold);

// ---------------------------------------------------------------------------
// States in the triple's product frame (qubit (x) rest).

/// rho_qubit (x) rho_rest with rho_qubit = (1 + b . sigma) / 2 and rho_rest
/// maximally mixed.
DensityOperator product_state(const QubitTriple& t, const std::array<double, 3>& bloch);
/// rho_qubit (x) rho_rest for arbitrary factors.
DensityOperator product_state(const QubitTriple& t, const Matrix& rho_qubit, const Matrix& rho_rest);
/// (|0>|0> + |1>|1>) / sqrt 2 across the split; needs N = 4.
DensityOperator bell_state(const QubitTriple& t);
/// Random pure product state (qubit factor and rest factor both pure).
DensityOperator random_product_state(const QubitTriple& t, Rng& rng);
/// Random pure state with Schmidt coefficients bounded away from (1, 0):
/// the smaller one is drawn from [0.1, 1/sqrt 2].
DensityOperator random_entangled_state(const QubitTriple& t, Rng& rng);

} // namespace qubitfield
