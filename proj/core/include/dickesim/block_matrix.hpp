#pragma once

#include "dickesim/ladder.hpp"

#include <Eigen/Dense>
#include <vector>

namespace dickesim {

using VectorXcd = Eigen::VectorXcd;

/// Permutation-invariant density matrix stored as one (2j+1)x(2j+1) complex
/// block per ladder rung. Each of the d_j degenerate copies of block j
/// carries the same matrix, so the trace convention is
///   trace(rho) = sum_j d_j * tr(p_j).
///
/// Vectorization is column-stacking of each block, blocks concatenated in
/// descending-j order (the project-wide convention; see superop.hpp).
class BlockDensityMatrix {
public:
    BlockDensityMatrix() = default;
    explicit BlockDensityMatrix(const DickeLadder& ladder);

    int n_blocks() const { return static_cast<int>(blocks_.size()); }
    MatrixXcd& block(int b) { return blocks_[b]; }
    const MatrixXcd& block(int b) const { return blocks_[b]; }

    /// Degeneracy-weighted trace.
    Complex trace(const DickeLadder& ladder) const;

    /// Degeneracy-weighted Hilbert-Schmidt inner product tr(this^dag other).
    Complex hs_inner(const BlockDensityMatrix& other, const DickeLadder& ladder) const;

    /// <A> = sum_j d_j tr(A_j p_j) for a block-diagonal collective operator.
    Complex expectation(const DickeLadder& ladder, CollectiveOp kind) const;

    /// Expectation of a product of collective operators applied left to right.
    Complex expectation_product(const DickeLadder& ladder,
                                const std::vector<CollectiveOp>& kinds) const;

    void hermitize();
    void scale(double s);
    double max_hermiticity_defect() const;

    VectorXcd vectorize(const DickeLadder& ladder) const;
    static BlockDensityMatrix from_vector(const DickeLadder& ladder, const VectorXcd& v);

    /// Ground state |N/2, -N/2><N/2, -N/2|.
    static BlockDensityMatrix ground_state(const DickeLadder& ladder);

    /// Totally mixed state 1/2^N (identity in every degenerate block copy).
    static BlockDensityMatrix totally_mixed(const DickeLadder& ladder);

    /// Pure state in the j = N/2 block from amplitudes c_m (m ascending).
    static BlockDensityMatrix symmetric_pure(const DickeLadder& ladder, const VectorXcd& amps);

private:
    std::vector<MatrixXcd> blocks_;
};

} // namespace dickesim
