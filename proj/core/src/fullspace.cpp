#include "dickesim/fullspace.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace dickesim {

namespace {

int popcount(int x) { return std::popcount(static_cast<unsigned>(x)); }

SparseMatrixXcd spkron(const SparseMatrixXcd& a, const SparseMatrixXcd& b) {
    SparseMatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<size_t>(a.nonZeros()) * b.nonZeros());
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseMatrixXcd::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SparseMatrixXcd::InnerIterator ib(b, kb); ib; ++ib)
                    trip.emplace_back(
                        static_cast<int>(ia.row() * b.rows() + ib.row()),
                        static_cast<int>(ia.col() * b.cols() + ib.col()),
                        ia.value() * ib.value());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SparseMatrixXcd speye(int dim) {
    SparseMatrixXcd eye(dim, dim);
    eye.setIdentity();
    return eye;
}

} // namespace

FullSpaceOps::FullSpaceOps(int n_atoms, int cap) : n_(n_atoms) {
    if (n_atoms < 1)
        throw std::domain_error("FullSpaceOps: n_atoms must be >= 1");
    if (n_atoms > cap)
        throw std::runtime_error(
            "FullSpaceOps: N = " + std::to_string(n_atoms) + " exceeds the full-space cap of " +
            std::to_string(cap) + "; use the permutation-invariant block solver instead");
    dim_ = 1 << n_;
    scratch_.resize(dim_);
}

void FullSpaceOps::apply_sminus(const FullStateVector& in, FullStateVector& out) const {
    out.setZero(dim_);
    for (int b = 0; b < dim_; ++b) {
        const Complex v = in[b];
        if (v == Complex(0.0)) continue;
        for (int bits = b; bits; bits &= bits - 1)
            out[b & ~(bits & -bits)] += v;
    }
}

void FullSpaceOps::apply_splus(const FullStateVector& in, FullStateVector& out) const {
    out.setZero(dim_);
    for (int b = 0; b < dim_; ++b) {
        const Complex v = in[b];
        if (v == Complex(0.0)) continue;
        for (int n = 0; n < n_; ++n)
            if (!(b & (1 << n)))
                out[b | (1 << n)] += v;
    }
}

void FullSpaceOps::apply_sx(const FullStateVector& in, FullStateVector& out) const {
    out.setZero(dim_);
    for (int b = 0; b < dim_; ++b) {
        const Complex v = 0.5 * in[b];
        if (v == Complex(0.0)) continue;
        for (int n = 0; n < n_; ++n)
            out[b ^ (1 << n)] += v;
    }
}

void FullSpaceOps::apply_sy(const FullStateVector& in, FullStateVector& out) const {
    // Sy = i(S- - S+)/2: lowering contributes +i/2, raising -i/2
    out.setZero(dim_);
    const Complex half_i(0.0, 0.5);
    for (int b = 0; b < dim_; ++b) {
        const Complex v = in[b];
        if (v == Complex(0.0)) continue;
        for (int n = 0; n < n_; ++n) {
            if (b & (1 << n))
                out[b & ~(1 << n)] += half_i * v;
            else
                out[b | (1 << n)] -= half_i * v;
        }
    }
}

void FullSpaceOps::apply_sz(const FullStateVector& in, FullStateVector& out) const {
    out.resize(dim_);
    for (int b = 0; b < dim_; ++b)
        out[b] = (popcount(b) - 0.5 * n_) * in[b];
}

void FullSpaceOps::apply_splus_sminus(const FullStateVector& in, FullStateVector& out) const {
    apply_sminus(in, scratch_);
    apply_splus(scratch_, out);
}

void FullSpaceOps::apply_sigma(int atom, const FullStateVector& in, FullStateVector& out) const {
    out.setZero(dim_);
    const int mask = 1 << atom;
    for (int b = 0; b < dim_; ++b)
        if (b & mask)
            out[b & ~mask] = in[b];
}

SparseMatrixXcd FullSpaceOps::sparse(CollectiveOp kind) const {
    std::vector<Eigen::Triplet<Complex>> trip;
    const Complex half_i(0.0, 0.5);
    for (int b = 0; b < dim_; ++b) {
        switch (kind) {
        case CollectiveOp::Sz:
            trip.emplace_back(b, b, Complex(popcount(b) - 0.5 * n_, 0.0));
            break;
        case CollectiveOp::Sminus:
            for (int n = 0; n < n_; ++n)
                if (b & (1 << n))
                    trip.emplace_back(b & ~(1 << n), b, Complex(1.0, 0.0));
            break;
        case CollectiveOp::Splus:
            for (int n = 0; n < n_; ++n)
                if (!(b & (1 << n)))
                    trip.emplace_back(b | (1 << n), b, Complex(1.0, 0.0));
            break;
        case CollectiveOp::Sx:
            for (int n = 0; n < n_; ++n)
                trip.emplace_back(b ^ (1 << n), b, Complex(0.5, 0.0));
            break;
        case CollectiveOp::Sy:
            for (int n = 0; n < n_; ++n) {
                if (b & (1 << n))
                    trip.emplace_back(b & ~(1 << n), b, half_i);
                else
                    trip.emplace_back(b | (1 << n), b, -half_i);
            }
            break;
        case CollectiveOp::Ssquared: {
            // S^2 = S+S- + Sz(Sz - 1)... built from the others below instead
            throw std::invalid_argument("FullSpaceOps::sparse: build Ssquared from components");
        }
        }
    }
    SparseMatrixXcd out(dim_, dim_);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SparseMatrixXcd FullSpaceOps::sparse_sigma(int atom) const {
    std::vector<Eigen::Triplet<Complex>> trip;
    const int mask = 1 << atom;
    for (int b = 0; b < dim_; ++b)
        if (b & mask)
            trip.emplace_back(b & ~mask, b, Complex(1.0, 0.0));
    SparseMatrixXcd out(dim_, dim_);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SparseMatrixXcd build_liouvillian_full(const ModelParams& params, int max_n) {
    params.validate();
    FullSpaceOps ops(params.n_atoms, max_n);
    const int d = ops.dim();
    const SparseMatrixXcd eye = speye(d);
    const SparseMatrixXcd sx = ops.sparse(CollectiveOp::Sx);
    const SparseMatrixXcd sm = ops.sparse(CollectiveOp::Sminus);
    const SparseMatrixXcd sp = ops.sparse(CollectiveOp::Splus);

    const Complex I(0.0, 1.0);
    SparseMatrixXcd ham = 2.0 * params.omega * sx;
    SparseMatrixXcd liou =
        -I * (spkron(eye, ham) - spkron(SparseMatrixXcd(ham.transpose()), eye));

    if (params.gamma_c > 0) {
        const SparseMatrixXcd spsm = sp * sm;
        liou += (0.5 * params.gamma_c) *
                (2.0 * spkron(SparseMatrixXcd(sp.transpose()), sm) -
                 spkron(eye, spsm) - spkron(SparseMatrixXcd(spsm.transpose()), eye));
    }
    if (params.gamma_s > 0) {
        for (int n = 0; n < params.n_atoms; ++n) {
            const SparseMatrixXcd sig = ops.sparse_sigma(n);
            const SparseMatrixXcd num = SparseMatrixXcd(sig.adjoint()) * sig;
            liou += (0.5 * params.gamma_s) *
                    (2.0 * spkron(SparseMatrixXcd(SparseMatrixXcd(sig.adjoint()).transpose()), sig) -
                     spkron(eye, num) - spkron(SparseMatrixXcd(num.transpose()), eye));
        }
    }
    liou.makeCompressed();
    return liou;
}

TraceFunctional full_trace_functional(int n_atoms) {
    const int d = 1 << n_atoms;
    TraceFunctional tr;
    tr.indices.reserve(d);
    tr.weights.assign(d, 1.0);
    for (int c = 0; c < d; ++c)
        tr.indices.push_back(c * d + c);
    return tr;
}

FullDensityMatrix steady_state_full(const SparseMatrixXcd& liouvillian) {
    const int dim2 = static_cast<int>(liouvillian.rows());
    const int d = static_cast<int>(std::llround(std::sqrt(double(dim2))));
    const int n = static_cast<int>(std::llround(std::log2(double(d))));
    Eigen::VectorXcd x = steady_state_lu(liouvillian, full_trace_functional(n));
    FullDensityMatrix rho = Eigen::Map<const FullDensityMatrix>(x.data(), d, d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return rho;
}

std::vector<AngularMomentumIrrep> angular_basis(int n_atoms) {
    if (n_atoms < 1 || n_atoms > 12)
        throw std::domain_error("angular_basis: N must be in [1, 12]");
    std::vector<AngularMomentumIrrep> irreps;
    irreps.push_back({1, Eigen::MatrixXd::Identity(2, 2)}); // |1/2,-1/2>=|g>, |1/2,+1/2>=|e>

    for (int added = 2; added <= n_atoms; ++added) {
        const int old_dim = 1 << (added - 1);
        const int new_dim = 2 * old_dim;
        const int excited = old_dim; // new atom occupies the next bit
        std::vector<AngularMomentumIrrep> next;
        for (const auto& ir : irreps) {
            const int tj = ir.twice_j;
            // couple j with 1/2: J = j + 1/2 always, J = j - 1/2 when j > 0
            {
                const int tJ = tj + 1;
                Eigen::MatrixXd up = Eigen::MatrixXd::Zero(new_dim, tJ + 1);
                for (int r = 0; r <= tJ; ++r) {
                    const int tm = 2 * r - tJ;
                    const double cp = std::sqrt((tj + tm + 1) / (2.0 * (tj + 1)));
                    const double cm = std::sqrt((tj - tm + 1) / (2.0 * (tj + 1)));
                    const int rm = (tm - 1 + tj) / 2; // column of |j, m-1/2>
                    const int rp = (tm + 1 + tj) / 2;
                    if (rm >= 0 && rm <= tj)
                        up.block(excited, r, old_dim, 1) += cp * ir.states.col(rm);
                    if (rp >= 0 && rp <= tj)
                        up.block(0, r, old_dim, 1) += cm * ir.states.col(rp);
                }
                next.push_back({tJ, std::move(up)});
            }
            if (tj > 0) {
                const int tJ = tj - 1;
                Eigen::MatrixXd down = Eigen::MatrixXd::Zero(new_dim, tJ + 1);
                for (int r = 0; r <= tJ; ++r) {
                    const int tm = 2 * r - tJ;
                    const double cp = -std::sqrt((tj - tm + 1) / (2.0 * (tj + 1)));
                    const double cm = std::sqrt((tj + tm + 1) / (2.0 * (tj + 1)));
                    const int rm = (tm - 1 + tj) / 2;
                    const int rp = (tm + 1 + tj) / 2;
                    if (rm >= 0 && rm <= tj)
                        down.block(excited, r, old_dim, 1) += cp * ir.states.col(rm);
                    if (rp >= 0 && rp <= tj)
                        down.block(0, r, old_dim, 1) += cm * ir.states.col(rp);
                }
                next.push_back({tJ, std::move(down)});
            }
        }
        irreps = std::move(next);
    }
    return irreps;
}

BlockDensityMatrix block_from_full(const FullDensityMatrix& rho, const DickeLadder& ladder,
                                   const std::vector<AngularMomentumIrrep>& basis) {
    BlockDensityMatrix out(ladder);
    for (const auto& ir : basis) {
        const int b = ladder.block_of_twice_j(ir.twice_j);
        if (b < 0)
            throw std::logic_error("block_from_full: irrep without matching ladder block");
        out.block(b) += ir.states.transpose() * rho * ir.states;
    }
    for (int b = 0; b < ladder.n_blocks(); ++b)
        out.block(b) /= ladder.block_weight(b);
    return out;
}

FullDensityMatrix full_from_block(const BlockDensityMatrix& rho, const DickeLadder& ladder,
                                  const std::vector<AngularMomentumIrrep>& basis) {
    const int d = 1 << ladder.n_atoms();
    FullDensityMatrix out = FullDensityMatrix::Zero(d, d);
    for (const auto& ir : basis) {
        const int b = ladder.block_of_twice_j(ir.twice_j);
        out += ir.states * rho.block(b) * ir.states.transpose();
    }
    return out;
}

FullStateVector dicke_state_full(int n_atoms, int twice_m) {
    if ((n_atoms + twice_m) % 2 != 0 || twice_m < -n_atoms || twice_m > n_atoms)
        throw std::domain_error("dicke_state_full: invalid m");
    const int k = (twice_m + n_atoms) / 2; // excitation count
    const int d = 1 << n_atoms;
    double binom = 1.0;
    for (int i = 1; i <= k; ++i)
        binom *= double(n_atoms - k + i) / i;
    const double amp = 1.0 / std::sqrt(binom);
    FullStateVector psi = FullStateVector::Zero(d);
    for (int b = 0; b < d; ++b)
        if (popcount(b) == k)
            psi[b] = amp;
    return psi;
}

} // namespace dickesim
