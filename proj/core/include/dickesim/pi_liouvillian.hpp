#pragma once

#include "dickesim/block_matrix.hpp"
#include "dickesim/params.hpp"
#include "dickesim/superop.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dickesim {

/// Master-equation generator on the vectorized permutation-invariant state
/// (see BlockDensityMatrix for the vectorization convention). The drive and
/// the collective decay act within each total-spin block; individual decay
/// additionally couples block j to j +- 1 with rank-one transfer kernels.
/// Scales to N = 64 (sparse assembly, no dense intermediates).
SparseMatrixXcd build_liouvillian_pi(const ModelParams& params, const DickeLadder& ladder);

/// Degeneracy-weighted trace functional on the vectorized block state.
TraceFunctional pi_trace_functional(const DickeLadder& ladder);

/// max_c |sum_k w_k L(i_k, c)|: how far L is from preserving the trace.
double trace_defect(const SparseMatrixXcd& liouvillian, const TraceFunctional& trace);

/// Unique steady state, from the row-replacement LU solve. With cross_check
/// the result is compared against an independent inverse-iteration solve and
/// a disagreement throws.
BlockDensityMatrix steady_state_pi(const SparseMatrixXcd& liouvillian,
                                   const DickeLadder& ladder,
                                   bool cross_check = false);

/// rho(t) = exp(L t) rho0 via adaptive Krylov propagation.
BlockDensityMatrix evolve(const SparseMatrixXcd& liouvillian, const DickeLadder& ladder,
                          const BlockDensityMatrix& rho0, double t, double tol = 1e-9);

/// Precomputed dense exp(L dt) for repeated fixed-step propagation; the
/// preferred tool for long stiff relaxations at moderate dimension.
class DensePropagator {
public:
    DensePropagator(const SparseMatrixXcd& liouvillian, double dt, int max_dim = 2600);
    const Eigen::MatrixXcd& matrix() const { return step_; }
    double dt() const { return dt_; }
    void advance(Eigen::VectorXcd& v) const { v = step_ * v; }

private:
    Eigen::MatrixXcd step_;
    double dt_;
};

enum class GapMethod {
    Auto,        ///< DenseEig when affordable, otherwise ShiftInvert
    DenseEig,    ///< full dense spectrum of L
    ShiftInvert, ///< inverse iteration around 0 with the steady mode deflated
    DecayFit     ///< log-linear fit of a relaxation tail; no eigenmode matrix
};

/// Slowest nonzero relaxation mode of the Liouvillian.
struct SpectralResult {
    double lambda1 = 0.0;     ///< gap: -Re of the eigenvalue closest to zero
    double lambda1_imag = 0.0;
    BlockDensityMatrix rho1;  ///< Hermitian, traceless, HS-normalized
    GapMethod method_used = GapMethod::Auto;
    double fit_r_squared = 1.0; ///< DecayFit only
};

/// Compute the spectral gap and its eigenmode. DecayFit enforces a tail of
/// at least three e-foldings with R^2 >= 0.99 and throws otherwise.
SpectralResult spectral_gap(const SparseMatrixXcd& liouvillian, const DickeLadder& ladder,
                            GapMethod method = GapMethod::Auto,
                            const BlockDensityMatrix* steady_hint = nullptr);

/// Metastable pair extracted from the slow eigenmode: rho1 is split into its
/// positive and negative spectral parts, each normalized to a state. The sign
/// is fixed so rho_plus is the high-coherence branch (larger <S^2>).
struct MetastablePair {
    BlockDensityMatrix rho_plus;
    BlockDensityMatrix rho_minus;
    double a_plus = 0.0;      ///< weight of rho_plus in the steady state
    double a_minus = 0.0;
    double lambda1 = 0.0;
    double gamma_plus = 0.0;  ///< escape rate out of rho_plus  (= lambda1 * a_minus)
    double gamma_minus = 0.0; ///< escape rate out of rho_minus (= lambda1 * a_plus)
};

MetastablePair metastable_decomposition(const DickeLadder& ladder,
                                        const BlockDensityMatrix& steady,
                                        const SpectralResult& spectral);

} // namespace dickesim
