#pragma once

#include "dickesim/block_matrix.hpp"
#include "dickesim/fullspace.hpp"
#include "dickesim/ladder.hpp"

#include <map>
#include <optional>

namespace dickesim {

/// Scalar summary of a state; one row of a parameter sweep.
struct ObservableSet {
    double sz_mean = 0.0;
    double s2_mean = 0.0;
    double intensity = 0.0; ///< <S+ S->
    double g2_zero = 0.0;
    double xi_squared = 0.0;
    std::map<int, double> pm_distribution; ///< keyed by 2m
    std::optional<double> crss_fidelity;
};

/// Coherently radiating spin state: the asymptotic eigenstate of S- with
/// eigenvalue alpha, built by the upward recursion
///   c_{m+1} sqrt((j+m+1)(j-m)) = alpha c_m
/// over the fully symmetric j = N/2 block.
struct CrssState {
    int twice_j = 0;
    Complex alpha;
    VectorXcd amplitudes; ///< m ascending, normalized
    double residual = 0.0; ///< ||S- psi - alpha psi||
};

/// P_m = sum_j d_j <j,m|rho|j,m>; keys are 2m, values sum to 1.
std::map<int, double> magnetization_distribution(const BlockDensityMatrix& rho,
                                                 const DickeLadder& ladder);

/// g2(0) = <S+ S+ S- S-> / <S+ S->^2. Throws when the intensity vanishes.
double g2_zero(const BlockDensityMatrix& rho, const DickeLadder& ladder);

/// xi^2 = N min_phi Var[S_phi] / |<S>|^2 with S_phi in the plane
/// perpendicular to the mean spin; the minimization is the smallest
/// eigenvalue of the symmetrized 2x2 transverse covariance matrix.
/// Throws when |<S>| < 1e-9.
double spin_squeezing_numeric(const BlockDensityMatrix& rho, const DickeLadder& ladder);

/// CRSS with |alpha| < N/2; the driven steady-state choice is
/// alpha = (-i N/2) Omega/Omega_c.
CrssState crss_state(int n_atoms, Complex alpha);

/// CRSS embedded in the full 2^N space (for trajectory overlaps). N <= 12.
FullStateVector crss_full(int n_atoms, Complex alpha);

/// F = <psi|rho|psi> for a pure comparator living in the j = N/2 block.
double fidelity_pure(const BlockDensityMatrix& rho, const DickeLadder& ladder,
                     const VectorXcd& symmetric_amplitudes);

/// Uhlmann fidelity between two block density matrices,
/// F = (sum_j d_j tr sqrt(sqrt(rho_j) sigma_j sqrt(rho_j)))^2.
double fidelity(const BlockDensityMatrix& rho, const BlockDensityMatrix& sigma,
                const DickeLadder& ladder);

/// All scalar observables of a state in one call.
ObservableSet observable_set(const BlockDensityMatrix& rho, const DickeLadder& ladder,
                             const CrssState* crss = nullptr);

/// Closed-form expectations of the totally mixed state 1/2^N.
struct MixedReference {
    double sz_mean = 0.0;       ///< 0
    double sz2_mean = 0.0;      ///< N/4
    double intensity = 0.0;     ///< N/2
    double s2_mean = 0.0;       ///< 3N/4
    double sppsmm = 0.0;        ///< <S+ S+ S- S-> = N(N-1)/2
    double g2_zero = 0.0;       ///< 2(1 - 1/N)
};

MixedReference mixed_state_reference(int n_atoms);

// --- pure-state observables in the full space (trajectory sampling) ---

double sz_mean_full(const FullSpaceOps& ops, const FullStateVector& psi);
double s2_mean_full(const FullSpaceOps& ops, const FullStateVector& psi);
double intensity_full(const FullSpaceOps& ops, const FullStateVector& psi);

} // namespace dickesim
