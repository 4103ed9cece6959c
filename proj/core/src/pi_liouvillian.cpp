#include "dickesim/pi_liouvillian.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace dickesim {

namespace {

using Triplets = std::vector<Eigen::Triplet<Complex>>;

/// Add coeff * kron(X, A) restricted to one diagonal block of the
/// superoperator (both factors act within the same spin block, offset off).
void add_block_kron(Triplets& trip, int off, Complex coeff,
                    const MatrixXcd& x, const MatrixXcd& a) {
    const int d = static_cast<int>(a.rows());
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            const Complex xv = coeff * x(p, q);
            if (xv == Complex(0.0)) continue;
            for (int r = 0; r < d; ++r)
                for (int s = 0; s < d; ++s) {
                    const Complex v = xv * a(r, s);
                    if (v != Complex(0.0))
                        trip.emplace_back(off + p * d + r, off + q * d + s, v);
                }
        }
}

} // namespace

SparseMatrixXcd build_liouvillian_pi(const ModelParams& params, const DickeLadder& ladder) {
    params.validate();
    const int n = ladder.n_atoms();
    if (n != params.n_atoms)
        throw std::invalid_argument("build_liouvillian_pi: ladder/params atom count mismatch");
    if (params.gamma_s > 0.0 && ladder.symmetric_only() && n > 1)
        throw std::invalid_argument(
            "build_liouvillian_pi: individual decay couples j sectors; use the full ladder");
    if (params.gamma_s == 0.0 && ladder.n_blocks() > 1)
        throw std::invalid_argument(
            "build_liouvillian_pi: with gamma_s = 0 the blocks decouple and the steady state "
            "is not unique; use a symmetric-only ladder");
    const Complex I(0.0, 1.0);

    Triplets trip;
    for (int b = 0; b < ladder.n_blocks(); ++b) {
        const int tj = ladder.twice_j(b);
        const int d = tj + 1;
        const int off = ladder.block_offset(b);
        const MatrixXcd eye = MatrixXcd::Identity(d, d);

        // drive: -i [2 Omega Sx, rho]
        if (params.omega != 0.0) {
            const MatrixXcd ham = 2.0 * params.omega * ladder.block_operator(b, CollectiveOp::Sx);
            add_block_kron(trip, off, -I, eye, ham);
            add_block_kron(trip, off, I, ham.transpose(), eye);
        }

        // collective decay: acts within each block
        if (params.gamma_c > 0.0) {
            const MatrixXcd sm = ladder.block_operator(b, CollectiveOp::Sminus);
            const MatrixXcd spsm = sm.adjoint() * sm; // diagonal
            add_block_kron(trip, off, params.gamma_c, sm, sm); // S+^T = S-
            add_block_kron(trip, off, -0.5 * params.gamma_c, eye, spsm);
            add_block_kron(trip, off, -0.5 * params.gamma_c, spsm.transpose(), eye);
        }

        if (params.gamma_s > 0.0) {
            // anticommutator part: sum_n sigma_n^dag sigma_n = N/2 + Sz, so
            // the loss is diagonal with rate (gamma_s/2)(N + m + m')
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    trip.emplace_back(off + c * d + r, off + c * d + r,
                                      Complex(-0.5 * params.gamma_s * (n + r + c - tj), 0.0));

            // recycling sum_n sigma_n rho sigma_n^dag: rank-one transfer
            // kernels into blocks j' = j, j - 1, j + 1. With r = j + m the
            // ladder factors are r, tj - r + 1 etc.; the prefactors are fixed
            // by the trace sum rule sum_j' d_j' K(m,m) = d_j (N/2 + m).
            const int b_dn = ladder.block_of_twice_j(tj - 2);
            const int b_up = ladder.block_of_twice_j(tj + 2);
            const double k_same =
                tj > 0 ? params.gamma_s * (n + 2.0) / (double(tj) * (tj + 2.0)) : 0.0;
            const double k_down =
                b_dn >= 0 ? params.gamma_s * ((n - tj) / 2.0 + 1.0) / (double(tj) * (tj - 1.0))
                          : 0.0;
            const double k_up =
                b_up >= 0 ? params.gamma_s * ((n + tj) / 2.0 + 2.0) / ((tj + 3.0) * (tj + 2.0))
                          : 0.0;

            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) {
                    const int src = off + c * d + r;
                    if (k_same > 0.0 && r >= 1 && c >= 1) {
                        const double amp = std::sqrt(double(r) * (tj - r + 1.0) *
                                                     double(c) * (tj - c + 1.0));
                        trip.emplace_back(off + (c - 1) * d + (r - 1), src,
                                          Complex(k_same * amp, 0.0));
                    }
                    if (k_down > 0.0 && r >= 2 && c >= 2) {
                        const int dd = d - 2;
                        const int odn = ladder.block_offset(b_dn);
                        const double amp = std::sqrt(double(r) * (r - 1.0) *
                                                     double(c) * (c - 1.0));
                        trip.emplace_back(odn + (c - 2) * dd + (r - 2), src,
                                          Complex(k_down * amp, 0.0));
                    }
                    if (k_up > 0.0) {
                        const int du = d + 2;
                        const int oup = ladder.block_offset(b_up);
                        const double amp = std::sqrt((tj - r + 1.0) * (tj - r + 2.0) *
                                                     (tj - c + 1.0) * (tj - c + 2.0));
                        trip.emplace_back(oup + c * du + r, src,
                                          Complex(k_up * amp, 0.0));
                    }
                }
        }
    }

    SparseMatrixXcd liou(ladder.vectorized_dim(), ladder.vectorized_dim());
    liou.setFromTriplets(trip.begin(), trip.end());
    liou.makeCompressed();
    return liou;
}

TraceFunctional pi_trace_functional(const DickeLadder& ladder) {
    TraceFunctional tr;
    for (int b = 0; b < ladder.n_blocks(); ++b) {
        const int d = ladder.block_dim(b);
        const int off = ladder.block_offset(b);
        for (int r = 0; r < d; ++r) {
            tr.indices.push_back(off + r * d + r);
            tr.weights.push_back(ladder.block_weight(b));
        }
    }
    return tr;
}

double trace_defect(const SparseMatrixXcd& liouvillian, const TraceFunctional& trace) {
    std::vector<double> weight_of(liouvillian.rows(), 0.0);
    for (size_t k = 0; k < trace.indices.size(); ++k)
        weight_of[trace.indices[k]] = trace.weights[k];
    double worst = 0.0;
    for (int col = 0; col < liouvillian.outerSize(); ++col) {
        Complex acc = 0.0;
        for (SparseMatrixXcd::InnerIterator it(liouvillian, col); it; ++it)
            acc += weight_of[it.row()] * it.value();
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

BlockDensityMatrix steady_state_pi(const SparseMatrixXcd& liouvillian,
                                   const DickeLadder& ladder, bool cross_check) {
    const TraceFunctional trace = pi_trace_functional(ladder);
    Eigen::VectorXcd x = steady_state_lu(liouvillian, trace);
    if (cross_check) {
        const Eigen::VectorXcd y = steady_state_inverse_iteration(liouvillian, trace);
        const double diff = (x - y).template lpNorm<Eigen::Infinity>();
        if (diff > 1e-8)
            throw std::runtime_error(
                "steady_state_pi: LU and inverse-iteration solutions disagree by " +
                std::to_string(diff));
    }
    BlockDensityMatrix rho = BlockDensityMatrix::from_vector(ladder, x);
    rho.hermitize();
    return rho;
}

BlockDensityMatrix evolve(const SparseMatrixXcd& liouvillian, const DickeLadder& ladder,
                          const BlockDensityMatrix& rho0, double t, double tol) {
    const Eigen::VectorXcd v = krylov_expmv(liouvillian, rho0.vectorize(ladder), t, tol);
    BlockDensityMatrix rho = BlockDensityMatrix::from_vector(ladder, v);
    rho.hermitize();
    return rho;
}

DensePropagator::DensePropagator(const SparseMatrixXcd& liouvillian, double dt, int max_dim)
    : dt_(dt) {
    if (liouvillian.rows() > max_dim)
        throw std::runtime_error("DensePropagator: dimension " +
                                 std::to_string(liouvillian.rows()) +
                                 " exceeds the dense cap " + std::to_string(max_dim));
    Eigen::MatrixXcd dense = Eigen::MatrixXcd(liouvillian) * dt;
    step_ = dense.exp();
}

namespace {

/// Fix the overall phase of an eigenmode so it is (near-)Hermitian, then
/// hermitize, project out any residual trace, and HS-normalize.
BlockDensityMatrix finalize_mode(const DickeLadder& ladder, const Eigen::VectorXcd& raw) {
    BlockDensityMatrix mode = BlockDensityMatrix::from_vector(ladder, raw);
    // mode = e^{i phi} H with H Hermitian => sum_j d_j tr(mode_j mode_j) = e^{2 i phi} tr(H^2)
    Complex sq = 0.0;
    for (int b = 0; b < ladder.n_blocks(); ++b)
        sq += ladder.block_weight(b) * (mode.block(b) * mode.block(b)).trace();
    const double phi = 0.5 * std::arg(sq);
    const Complex phase(std::cos(-phi), std::sin(-phi));
    for (int b = 0; b < ladder.n_blocks(); ++b)
        mode.block(b) *= phase;
    mode.hermitize();

    const double tr = mode.trace(ladder).real();
    for (int b = 0; b < ladder.n_blocks(); ++b)
        mode.block(b) -= (tr / ladder.identity_trace()) *
                         MatrixXcd::Identity(ladder.block_dim(b), ladder.block_dim(b));
    const double norm = std::sqrt(std::abs(mode.hs_inner(mode, ladder)));
    if (norm > 0.0)
        mode.scale(1.0 / norm);
    return mode;
}

SpectralResult gap_dense(const SparseMatrixXcd& liouvillian, const DickeLadder& ladder) {
    const Eigen::MatrixXcd dense(liouvillian);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(dense);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("spectral_gap: dense eigensolve failed");
    const auto& vals = eig.eigenvalues();

    int zero_idx = 0;
    for (int k = 1; k < vals.size(); ++k)
        if (std::abs(vals[k]) < std::abs(vals[zero_idx]))
            zero_idx = k;
    int slow_idx = -1;
    for (int k = 0; k < vals.size(); ++k) {
        if (k == zero_idx) continue;
        if (slow_idx < 0 || vals[k].real() > vals[slow_idx].real())
            slow_idx = k;
    }
    if (slow_idx < 0)
        throw std::runtime_error("spectral_gap: no nonzero eigenvalue found");

    SpectralResult out;
    out.lambda1 = -vals[slow_idx].real();
    out.lambda1_imag = vals[slow_idx].imag();
    out.rho1 = finalize_mode(ladder, eig.eigenvectors().col(slow_idx));
    out.method_used = GapMethod::DenseEig;
    return out;
}

SpectralResult gap_shift_invert(const SparseMatrixXcd& liouvillian, const DickeLadder& ladder,
                                const BlockDensityMatrix* steady_hint) {
    const TraceFunctional trace = pi_trace_functional(ladder);
    Eigen::VectorXcd steady;
    if (steady_hint)
        steady = steady_hint->vectorize(ladder);
    else
        steady = steady_state_lu(liouvillian, trace);
    const double sigma = -1e-8 * std::max(inf_norm(liouvillian), 1.0);
    auto [lambda, vec] =
        eigenpair_near_shift(liouvillian, Complex(sigma, 0.0), steady, trace);

    SpectralResult out;
    out.lambda1 = -lambda.real();
    out.lambda1_imag = lambda.imag();
    out.rho1 = finalize_mode(ladder, vec);
    out.method_used = GapMethod::ShiftInvert;
    return out;
}

SpectralResult gap_decay_fit(const SparseMatrixXcd& liouvillian, const DickeLadder& ladder) {
    const TraceFunctional trace = pi_trace_functional(ladder);
    const Eigen::VectorXcd steady = steady_state_lu(liouvillian, trace);
    const double sz_ss =
        BlockDensityMatrix::from_vector(ladder, steady).expectation(ladder, CollectiveOp::Sz).real();

    const double dt = 5.0 / std::max(inf_norm(liouvillian), 1.0);
    const DensePropagator prop(liouvillian, dt, 4000);

    Eigen::VectorXcd v = BlockDensityMatrix::ground_state(ladder).vectorize(ladder);
    std::vector<double> devs; // |<Sz>(t) - <Sz>_ss| at t = k dt, k >= 1
    constexpr int kMaxSteps = 300000;
    constexpr double kMinEfolds = 3.0;

    auto window_fit = [&](int lo, int hi, double& slope, double& r2) {
        // least squares of ln(dev) vs t over samples [lo, hi)
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        const int n = hi - lo;
        for (int k = lo; k < hi; ++k) {
            const double x = (k + 1) * dt, y = std::log(devs[k]);
            sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
        }
        const double cov = sxy - sx * sy / n;
        const double vxx = sxx - sx * sx / n;
        const double vyy = syy - sy * sy / n;
        slope = cov / vxx;
        r2 = (vyy > 0) ? cov * cov / (vxx * vyy) : 1.0;
    };

    double dev0 = 0.0;
    for (int step = 0; step < kMaxSteps; ++step) {
        prop.advance(v);
        const double sz =
            BlockDensityMatrix::from_vector(ladder, v).expectation(ladder, CollectiveOp::Sz).real();
        const double dev = std::abs(sz - sz_ss);
        devs.push_back(dev);
        if (devs.size() == 1)
            dev0 = std::max(dev, 1e-300);
        if (dev < 1e-10 * dev0)
            break; // into the noise floor without a clean window
        const int n = static_cast<int>(devs.size());
        if (n >= 32 && (n & (n - 1)) == 0) { // check at powers of two
            const int lo = n / 2 - 1;
            const double efolds = std::log(devs[lo] / devs[n - 1]);
            if (efolds >= kMinEfolds) {
                double slope, r2;
                window_fit(lo, n, slope, r2);
                if (r2 >= 0.99 && slope < 0.0) {
                    SpectralResult out;
                    out.lambda1 = -slope;
                    out.fit_r_squared = r2;
                    out.method_used = GapMethod::DecayFit;
                    out.rho1 = finalize_mode(ladder, Eigen::VectorXcd(v - steady));
                    return out;
                }
            }
        }
    }
    throw std::runtime_error(
        "spectral_gap: decay fit found no clean single-exponential tail "
        "(need >= 3 e-foldings with R^2 >= 0.99)");
}

} // namespace

SpectralResult spectral_gap(const SparseMatrixXcd& liouvillian, const DickeLadder& ladder,
                            GapMethod method, const BlockDensityMatrix* steady_hint) {
    switch (method) {
    case GapMethod::DenseEig:
        return gap_dense(liouvillian, ladder);
    case GapMethod::ShiftInvert:
        return gap_shift_invert(liouvillian, ladder, steady_hint);
    case GapMethod::DecayFit:
        return gap_decay_fit(liouvillian, ladder);
    case GapMethod::Auto:
        if (ladder.vectorized_dim() <= 600)
            return gap_dense(liouvillian, ladder);
        return gap_shift_invert(liouvillian, ladder, steady_hint);
    }
    throw std::logic_error("spectral_gap: unknown method");
}

MetastablePair metastable_decomposition(const DickeLadder& ladder,
                                        const BlockDensityMatrix& steady,
                                        const SpectralResult& spectral) {
    BlockDensityMatrix pos(ladder), neg(ladder);
    for (int b = 0; b < ladder.n_blocks(); ++b) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(spectral.rho1.block(b));
        const auto& vals = eig.eigenvalues();
        const auto& vecs = eig.eigenvectors();
        for (int k = 0; k < vals.size(); ++k) {
            if (std::abs(vals[k]) < 1e-12)
                continue;
            const MatrixXcd proj = vecs.col(k) * vecs.col(k).adjoint();
            if (vals[k] > 0)
                pos.block(b) += vals[k] * proj;
            else
                neg.block(b) -= vals[k] * proj;
        }
    }
    const double tp = pos.trace(ladder).real();
    const double tn = neg.trace(ladder).real();
    if (tp <= 0 || tn <= 0)
        throw std::runtime_error(
            "metastable_decomposition: eigenmode lacks a sign-definite split");
    pos.scale(1.0 / tp);
    neg.scale(1.0 / tn);

    // rho_plus is the high-coherence branch
    if (pos.expectation(ladder, CollectiveOp::Ssquared).real() <
        neg.expectation(ladder, CollectiveOp::Ssquared).real())
        std::swap(pos, neg);

    MetastablePair out;
    out.lambda1 = spectral.lambda1;
    // The weights are overlaps in the aggregated permutation-invariant
    // representation (blocks scaled by their multiplicity d_j before taking
    // Frobenius products, i.e. d_j^2 weights), the convention in which the
    // reported decomposition weights approach a_+ + a_- = 1 from below.
    auto aggregated_inner = [&](const BlockDensityMatrix& a, const BlockDensityMatrix& b) {
        double sum = 0.0;
        for (int blk = 0; blk < ladder.n_blocks(); ++blk) {
            const double d = static_cast<double>(ladder.block_degeneracy(blk));
            sum += d * d * (a.block(blk).adjoint() * b.block(blk)).trace().real();
        }
        return sum;
    };
    out.a_plus = aggregated_inner(pos, steady) / aggregated_inner(pos, pos);
    out.a_minus = aggregated_inner(neg, steady) / aggregated_inner(neg, neg);
    out.gamma_plus = spectral.lambda1 * out.a_minus;
    out.gamma_minus = spectral.lambda1 * out.a_plus;
    out.rho_plus = std::move(pos);
    out.rho_minus = std::move(neg);
    return out;
}

} // namespace dickesim
