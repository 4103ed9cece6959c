#include "dickesim/block_matrix.hpp"

namespace dickesim {

BlockDensityMatrix::BlockDensityMatrix(const DickeLadder& ladder) {
    blocks_.reserve(ladder.n_blocks());
    for (int b = 0; b < ladder.n_blocks(); ++b)
        blocks_.push_back(MatrixXcd::Zero(ladder.block_dim(b), ladder.block_dim(b)));
}

Complex BlockDensityMatrix::trace(const DickeLadder& ladder) const {
    Complex t = 0.0;
    for (int b = 0; b < n_blocks(); ++b)
        t += ladder.block_weight(b) * blocks_[b].trace();
    return t;
}

Complex BlockDensityMatrix::hs_inner(const BlockDensityMatrix& other,
                                     const DickeLadder& ladder) const {
    Complex t = 0.0;
    for (int b = 0; b < n_blocks(); ++b)
        t += ladder.block_weight(b) * (blocks_[b].adjoint() * other.blocks_[b]).trace();
    return t;
}

Complex BlockDensityMatrix::expectation(const DickeLadder& ladder, CollectiveOp kind) const {
    Complex t = 0.0;
    for (int b = 0; b < n_blocks(); ++b)
        t += ladder.block_weight(b) * (ladder.block_operator(b, kind) * blocks_[b]).trace();
    return t;
}

Complex BlockDensityMatrix::expectation_product(const DickeLadder& ladder,
                                                const std::vector<CollectiveOp>& kinds) const {
    Complex t = 0.0;
    for (int b = 0; b < n_blocks(); ++b) {
        MatrixXcd op = MatrixXcd::Identity(ladder.block_dim(b), ladder.block_dim(b));
        for (CollectiveOp k : kinds)
            op = op * ladder.block_operator(b, k);
        t += ladder.block_weight(b) * (op * blocks_[b]).trace();
    }
    return t;
}

void BlockDensityMatrix::hermitize() {
    for (auto& blk : blocks_)
        blk = 0.5 * (blk + blk.adjoint()).eval();
}

void BlockDensityMatrix::scale(double s) {
    for (auto& blk : blocks_)
        blk *= s;
}

double BlockDensityMatrix::max_hermiticity_defect() const {
    double d = 0.0;
    for (const auto& blk : blocks_)
        d = std::max(d, (blk - blk.adjoint()).cwiseAbs().maxCoeff());
    return d;
}

VectorXcd BlockDensityMatrix::vectorize(const DickeLadder& ladder) const {
    VectorXcd v(ladder.vectorized_dim());
    for (int b = 0; b < n_blocks(); ++b) {
        const int dim = ladder.block_dim(b);
        v.segment(ladder.block_offset(b), dim * dim) =
            Eigen::Map<const VectorXcd>(blocks_[b].data(), dim * dim);
    }
    return v;
}

BlockDensityMatrix BlockDensityMatrix::from_vector(const DickeLadder& ladder, const VectorXcd& v) {
    BlockDensityMatrix rho(ladder);
    for (int b = 0; b < ladder.n_blocks(); ++b) {
        const int dim = ladder.block_dim(b);
        rho.blocks_[b] = Eigen::Map<const MatrixXcd>(
            v.data() + ladder.block_offset(b), dim, dim);
    }
    return rho;
}

BlockDensityMatrix BlockDensityMatrix::ground_state(const DickeLadder& ladder) {
    BlockDensityMatrix rho(ladder);
    rho.blocks_[0](0, 0) = 1.0; // block 0 is j = N/2, row 0 is m = -j
    return rho;
}

BlockDensityMatrix BlockDensityMatrix::totally_mixed(const DickeLadder& ladder) {
    BlockDensityMatrix rho(ladder);
    const double w = 1.0 / ladder.identity_trace(); // 2^-N on the full ladder
    for (int b = 0; b < ladder.n_blocks(); ++b)
        rho.blocks_[b].diagonal().setConstant(w);
    return rho;
}

BlockDensityMatrix BlockDensityMatrix::symmetric_pure(const DickeLadder& ladder,
                                                      const VectorXcd& amps) {
    if (amps.size() != ladder.block_dim(0))
        throw std::invalid_argument("symmetric_pure: amplitude count must be N + 1");
    BlockDensityMatrix rho(ladder);
    rho.blocks_[0] = amps * amps.adjoint();
    return rho;
}

} // namespace dickesim
