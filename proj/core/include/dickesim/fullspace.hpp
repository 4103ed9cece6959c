#pragma once

#include "dickesim/block_matrix.hpp"
#include "dickesim/params.hpp"
#include "dickesim/superop.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

namespace dickesim {

/// Pure state over the 2^N computational basis. Bit k of a basis index is
/// the state of atom k (1 = excited), atom 0 in the least significant bit.
using FullStateVector = Eigen::VectorXcd;

/// 2^N x 2^N density matrix.
using FullDensityMatrix = Eigen::MatrixXcd;

/// Default caps keeping full-space work at desk scale.
inline constexpr int kFullSpaceSuperopCap = 8;
inline constexpr int kFullSpaceStateCap = 12;

/// Matrix-free collective and single-atom operators on the full space.
/// apply_* methods reuse an internal scratch buffer: one instance per thread.
class FullSpaceOps {
public:
    explicit FullSpaceOps(int n_atoms, int cap = kFullSpaceStateCap);

    int n_atoms() const { return n_; }
    int dim() const { return dim_; }

    void apply_sminus(const FullStateVector& in, FullStateVector& out) const;
    void apply_splus(const FullStateVector& in, FullStateVector& out) const;
    void apply_sx(const FullStateVector& in, FullStateVector& out) const;
    void apply_sy(const FullStateVector& in, FullStateVector& out) const;
    void apply_sz(const FullStateVector& in, FullStateVector& out) const;
    void apply_splus_sminus(const FullStateVector& in, FullStateVector& out) const;
    /// Single-atom lowering sigma_n.
    void apply_sigma(int atom, const FullStateVector& in, FullStateVector& out) const;

    /// Sparse representation of a collective operator.
    SparseMatrixXcd sparse(CollectiveOp kind) const;
    SparseMatrixXcd sparse_sigma(int atom) const;

private:
    int n_;
    int dim_;
    mutable FullStateVector scratch_;
};

/// Superoperator of the master equation on the vectorized full-space density
/// matrix (column-stacking convention: index = col * 2^N + row).
/// Throws a resource-limit error above the cap, pointing at the
/// permutation-invariant solver.
SparseMatrixXcd build_liouvillian_full(const ModelParams& params,
                                       int max_n = kFullSpaceSuperopCap);

TraceFunctional full_trace_functional(int n_atoms);

/// Unique steady state of the full-space Liouvillian, Hermitized and
/// normalized to unit trace.
FullDensityMatrix steady_state_full(const SparseMatrixXcd& liouvillian);

/// One copy of an irreducible total-spin block found by iterated
/// angular-momentum coupling: columns are |j, m> (m ascending) in the
/// computational basis.
struct AngularMomentumIrrep {
    int twice_j;
    Eigen::MatrixXd states; // 2^N x (2j+1), real by construction
};

/// All irrep copies for N atoms (Condon-Shortley phases). Memory grows as
/// 4^N; intended for N <= 10.
std::vector<AngularMomentumIrrep> angular_basis(int n_atoms);

/// Project a full-space density matrix onto the permutation-invariant block
/// form: p_j[m,m'] averaged over the d_j degenerate copies.
BlockDensityMatrix block_from_full(const FullDensityMatrix& rho, const DickeLadder& ladder,
                                   const std::vector<AngularMomentumIrrep>& basis);

/// Embed a block density matrix into the full space (every copy gets the
/// same block).
FullDensityMatrix full_from_block(const BlockDensityMatrix& rho, const DickeLadder& ladder,
                                  const std::vector<AngularMomentumIrrep>& basis);

/// Symmetric Dicke state |j = N/2, m> in the computational basis.
FullStateVector dicke_state_full(int n_atoms, int twice_m);

} // namespace dickesim
