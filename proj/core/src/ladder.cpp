#include "dickesim/ladder.hpp"

#include <cmath>
#include <stdexcept>

namespace dickesim {

std::uint64_t degeneracy_twice(int n_atoms, int twice_j) {
    if (n_atoms < 1 || n_atoms > 64)
        throw std::domain_error("degeneracy: n_atoms must be in [1, 64]");
    if (twice_j < 0 || twice_j > n_atoms || (n_atoms - twice_j) % 2 != 0)
        throw std::domain_error("degeneracy: j must satisfy 0 <= j <= N/2 with N/2 - j integral");

    // d_j^N = binom(N, N/2 - j) * (2j+1) / (N/2 + j + 1)
    const int k = (n_atoms - twice_j) / 2; // N/2 - j
    unsigned __int128 binom = 1;
    for (int i = 1; i <= k; ++i) {
        binom = binom * static_cast<unsigned>(n_atoms - k + i);
        binom /= static_cast<unsigned>(i);
    }
    const unsigned denom = static_cast<unsigned>((n_atoms + twice_j) / 2 + 1);
    unsigned __int128 d = binom * static_cast<unsigned>(twice_j + 1) / denom;
    return static_cast<std::uint64_t>(d);
}

std::uint64_t degeneracy(int n_atoms, double j) {
    const double tj = 2.0 * j;
    if (std::abs(tj - std::round(tj)) > 1e-9)
        throw std::domain_error("degeneracy: j must be a half-integer");
    return degeneracy_twice(n_atoms, static_cast<int>(std::llround(tj)));
}

double lowering_element(int twice_j, int twice_m) {
    // sqrt((j+m)(j-m+1)), arguments doubled
    const double jm = 0.5 * (twice_j + twice_m);
    const double jm1 = 0.5 * (twice_j - twice_m) + 1.0;
    return std::sqrt(jm * jm1);
}

DickeLadder::DickeLadder(int n_atoms, bool symmetric_only)
    : n_(n_atoms), symmetric_only_(symmetric_only) {
    if (n_atoms < 1)
        throw std::domain_error("DickeLadder: n_atoms must be >= 1");
    const int tj_min = symmetric_only ? n_ : (n_ % 2 == 0 ? 0 : 1);
    for (int tj = n_; tj >= tj_min; tj -= 2) {
        twice_j_.push_back(tj);
        degeneracy_.push_back(degeneracy_twice(n_, tj));
        weight_.push_back(static_cast<double>(degeneracy_.back()));
    }
    vec_dim_ = 0;
    identity_trace_ = 0.0;
    offset_.resize(twice_j_.size());
    for (int b = 0; b < n_blocks(); ++b) {
        offset_[b] = vec_dim_;
        vec_dim_ += block_dim(b) * block_dim(b);
        identity_trace_ += weight_[b] * block_dim(b);
    }
}

int DickeLadder::block_of_twice_j(int twice_j) const {
    const int b = (n_ - twice_j) / 2;
    if (twice_j < 0 || b < 0 || b >= n_blocks() || twice_j_[b] != twice_j)
        return -1;
    return b;
}

MatrixXcd DickeLadder::block_operator(int b, CollectiveOp kind) const {
    const int tj = twice_j_[b];
    const int dim = tj + 1;
    MatrixXcd op = MatrixXcd::Zero(dim, dim);
    const Complex I(0.0, 1.0);
    switch (kind) {
    case CollectiveOp::Sz:
        for (int r = 0; r < dim; ++r)
            op(r, r) = 0.5 * (2 * r - tj);
        break;
    case CollectiveOp::Ssquared:
        op.diagonal().setConstant(0.25 * tj * (tj + 2));
        break;
    case CollectiveOp::Sminus:
        // S-|j,m> = sqrt((j+m)(j-m+1)) |j,m-1>
        for (int r = 1; r < dim; ++r)
            op(r - 1, r) = lowering_element(tj, 2 * r - tj);
        break;
    case CollectiveOp::Splus:
        for (int r = 1; r < dim; ++r)
            op(r, r - 1) = lowering_element(tj, 2 * r - tj);
        break;
    case CollectiveOp::Sx:
        for (int r = 1; r < dim; ++r) {
            const double e = 0.5 * lowering_element(tj, 2 * r - tj);
            op(r - 1, r) = e;
            op(r, r - 1) = e;
        }
        break;
    case CollectiveOp::Sy:
        for (int r = 1; r < dim; ++r) {
            const double e = 0.5 * lowering_element(tj, 2 * r - tj);
            op(r - 1, r) = I * e;  // Sy = i(S- - S+)/2
            op(r, r - 1) = -I * e;
        }
        break;
    }
    return op;
}

} // namespace dickesim
