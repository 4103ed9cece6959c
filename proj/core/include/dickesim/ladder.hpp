#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace dickesim {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;

/// Kinds of collective angular-momentum operators on the Dicke ladder.
enum class CollectiveOp { Sx, Sy, Sz, Splus, Sminus, Ssquared };

/// Multiplicity d_j^N of the total-spin-j irrep in the decomposition of
/// N spin-1/2 particles. Exact integer arithmetic, valid for N <= 64.
/// Throws std::domain_error for invalid (N, j) pairings. j is passed as 2j.
std::uint64_t degeneracy_twice(int n_atoms, int twice_j);

/// Convenience overload taking j as a double (must be a half-integer).
std::uint64_t degeneracy(int n_atoms, double j);

/// The Dicke ladder of N spin-1/2 atoms: total-spin blocks j = N/2,
/// N/2 - 1, ..., down to 0 (N even) or 1/2 (N odd), with block dimension
/// 2j + 1 and multiplicity d_j. j is stored as the integer 2j so block
/// indexing stays exact for odd N.
///
/// Immutable after construction; safe to share across threads.
///
/// symmetric_only restricts the ladder to the single j = N/2 block (weight 1).
/// That is the right state space for purely collective dynamics (gamma_s = 0),
/// where the full ladder would decouple into independent sectors.
class DickeLadder {
public:
    explicit DickeLadder(int n_atoms, bool symmetric_only = false);

    int n_atoms() const { return n_; }
    int n_blocks() const { return static_cast<int>(twice_j_.size()); }
    bool symmetric_only() const { return symmetric_only_; }

    /// Trace of the (degeneracy-weighted) identity, sum_b w_b (2j_b + 1);
    /// equals 2^N on the full ladder.
    double identity_trace() const { return identity_trace_; }

    /// 2j of block b. Blocks are ordered by descending j; block 0 is j = N/2.
    int twice_j(int b) const { return twice_j_[b]; }
    int block_dim(int b) const { return twice_j_[b] + 1; }
    std::uint64_t block_degeneracy(int b) const { return degeneracy_[b]; }
    double block_weight(int b) const { return weight_[b]; }

    /// Index of the block with the given 2j, or -1 if absent.
    int block_of_twice_j(int twice_j) const;

    /// Total state-space size of a block density matrix, sum_j (2j+1)^2.
    int vectorized_dim() const { return vec_dim_; }

    /// Offset of block b in the concatenated (column-stacked) vectorization.
    int block_offset(int b) const { return offset_[b]; }

    /// Dense matrix of the requested operator on block b, in the basis
    /// |j, m> with m increasing along rows/columns (row r <-> m = r - j).
    MatrixXcd block_operator(int b, CollectiveOp kind) const;

private:
    int n_;
    int vec_dim_;
    bool symmetric_only_ = false;
    double identity_trace_ = 0.0;
    std::vector<int> twice_j_;
    std::vector<std::uint64_t> degeneracy_;
    std::vector<double> weight_;
    std::vector<int> offset_;
};

/// S_- matrix element sqrt((j+m)(j-m+1)) with arguments given as 2j, 2m.
double lowering_element(int twice_j, int twice_m);

} // namespace dickesim
