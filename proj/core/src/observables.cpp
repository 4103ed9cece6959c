#include "dickesim/observables.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace dickesim {

std::map<int, double> magnetization_distribution(const BlockDensityMatrix& rho,
                                                 const DickeLadder& ladder) {
    std::map<int, double> pm;
    for (int b = 0; b < ladder.n_blocks(); ++b) {
        const int tj = ladder.twice_j(b);
        const double w = ladder.block_weight(b);
        for (int r = 0; r <= tj; ++r)
            pm[2 * r - tj] += w * rho.block(b)(r, r).real();
    }
    return pm;
}

double g2_zero(const BlockDensityMatrix& rho, const DickeLadder& ladder) {
    const double intensity =
        rho.expectation_product(ladder, {CollectiveOp::Splus, CollectiveOp::Sminus}).real();
    if (intensity <= 1e-14)
        throw std::runtime_error("g2_zero: undefined correlation (zero intensity)");
    const double numer =
        rho.expectation_product(ladder, {CollectiveOp::Splus, CollectiveOp::Splus,
                                         CollectiveOp::Sminus, CollectiveOp::Sminus})
            .real();
    return numer / (intensity * intensity);
}

namespace {

/// 3x3 symmetrized covariance of (Sx, Sy, Sz) plus the mean vector.
void spin_moments(const BlockDensityMatrix& rho, const DickeLadder& ladder,
                  Eigen::Vector3d& mean, Eigen::Matrix3d& cov) {
    const CollectiveOp ops[3] = {CollectiveOp::Sx, CollectiveOp::Sy, CollectiveOp::Sz};
    Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
    for (int a = 0; a < 3; ++a) {
        mean[a] = rho.expectation(ladder, ops[a]).real();
        for (int b = 0; b < 3; ++b)
            second(a, b) = rho.expectation_product(ladder, {ops[a], ops[b]}).real();
    }
    cov = 0.5 * (second + second.transpose()) - mean * mean.transpose();
}

} // namespace

double spin_squeezing_numeric(const BlockDensityMatrix& rho, const DickeLadder& ladder) {
    Eigen::Vector3d mean;
    Eigen::Matrix3d cov;
    spin_moments(rho, ladder, mean, cov);
    const double len = mean.norm();
    if (len < 1e-9)
        throw std::runtime_error("spin_squeezing_numeric: undefined (vanishing mean spin)");

    // orthonormal frame perpendicular to the mean spin
    const Eigen::Vector3d n = mean / len;
    Eigen::Vector3d seed = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                 : Eigen::Vector3d::UnitY();
    const Eigen::Vector3d e1 = (seed - seed.dot(n) * n).normalized();
    const Eigen::Vector3d e2 = n.cross(e1);

    Eigen::Matrix2d perp;
    perp << e1.dot(cov * e1), e1.dot(cov * e2), e2.dot(cov * e1), e2.dot(cov * e2);
    perp = 0.5 * (perp + perp.transpose()).eval();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(perp);
    return ladder.n_atoms() * eig.eigenvalues()[0] / (len * len);
}

CrssState crss_state(int n_atoms, Complex alpha) {
    const double j = 0.5 * n_atoms;
    if (std::abs(alpha) >= j)
        throw std::domain_error("crss_state: need |alpha| < N/2");
    const int dim = n_atoms + 1;
    VectorXcd c(dim);
    c[0] = 1.0;
    for (int r = 0; r + 1 < dim; ++r) {
        const double m = r - j;
        c[r + 1] = alpha * c[r] / std::sqrt((j + m + 1.0) * (j - m));
    }
    c /= c.norm();

    // residual of the eigenvalue relation: (S- psi)_r = sqrt(...) c_{r+1}
    VectorXcd lowered = VectorXcd::Zero(dim);
    for (int r = 0; r + 1 < dim; ++r) {
        const double m = r - j;
        lowered[r] = std::sqrt((j + m + 1.0) * (j - m)) * c[r + 1];
    }
    CrssState out;
    out.twice_j = n_atoms;
    out.alpha = alpha;
    out.amplitudes = c;
    out.residual = (lowered - alpha * c).norm();
    return out;
}

FullStateVector crss_full(int n_atoms, Complex alpha) {
    const CrssState crss = crss_state(n_atoms, alpha);
    FullStateVector psi = FullStateVector::Zero(1 << n_atoms);
    for (int r = 0; r <= n_atoms; ++r)
        psi += crss.amplitudes[r] * dicke_state_full(n_atoms, 2 * r - n_atoms);
    return psi;
}

double fidelity_pure(const BlockDensityMatrix& rho, const DickeLadder& ladder,
                     const VectorXcd& symmetric_amplitudes) {
    if (symmetric_amplitudes.size() != ladder.block_dim(0))
        throw std::invalid_argument("fidelity_pure: comparator dimension mismatch");
    const Complex val = symmetric_amplitudes.adjoint() * rho.block(0) * symmetric_amplitudes;
    return std::max(0.0, val.real());
}

double fidelity(const BlockDensityMatrix& rho, const BlockDensityMatrix& sigma,
                const DickeLadder& ladder) {
    if (rho.n_blocks() != sigma.n_blocks())
        throw std::invalid_argument("fidelity: block count mismatch");
    double root_sum = 0.0;
    for (int b = 0; b < ladder.n_blocks(); ++b) {
        const Eigen::SelfAdjointEigenSolver<MatrixXcd> er(rho.block(b));
        const MatrixXcd sqrt_rho =
            er.eigenvectors() *
            er.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
            er.eigenvectors().adjoint();
        const MatrixXcd inner = sqrt_rho * sigma.block(b) * sqrt_rho;
        const Eigen::SelfAdjointEigenSolver<MatrixXcd> ei(inner);
        root_sum += ladder.block_weight(b) *
                    ei.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    }
    return std::min(1.0, root_sum * root_sum);
}

ObservableSet observable_set(const BlockDensityMatrix& rho, const DickeLadder& ladder,
                             const CrssState* crss) {
    ObservableSet out;
    out.sz_mean = rho.expectation(ladder, CollectiveOp::Sz).real();
    out.s2_mean = rho.expectation(ladder, CollectiveOp::Ssquared).real();
    out.intensity =
        rho.expectation_product(ladder, {CollectiveOp::Splus, CollectiveOp::Sminus}).real();
    out.g2_zero = g2_zero(rho, ladder);
    out.xi_squared = spin_squeezing_numeric(rho, ladder);
    out.pm_distribution = magnetization_distribution(rho, ladder);
    if (crss)
        out.crss_fidelity = fidelity_pure(rho, ladder, crss->amplitudes);
    return out;
}

MixedReference mixed_state_reference(int n_atoms) {
    if (n_atoms < 1)
        throw std::domain_error("mixed_state_reference: need N >= 1");
    const double n = n_atoms;
    MixedReference out;
    out.sz_mean = 0.0;
    out.sz2_mean = n / 4.0;
    out.intensity = n / 2.0;
    out.s2_mean = 3.0 * n / 4.0;
    out.sppsmm = n * (n - 1.0) / 2.0;
    out.g2_zero = 2.0 * (1.0 - 1.0 / n);
    return out;
}

double sz_mean_full(const FullSpaceOps& ops, const FullStateVector& psi) {
    FullStateVector tmp(psi.size());
    ops.apply_sz(psi, tmp);
    return psi.dot(tmp).real();
}

double s2_mean_full(const FullSpaceOps& ops, const FullStateVector& psi) {
    // S^2 = S+ S- + Sz^2 - Sz
    FullStateVector tmp(psi.size());
    ops.apply_splus_sminus(psi, tmp);
    double val = psi.dot(tmp).real();
    ops.apply_sz(psi, tmp);
    val += tmp.squaredNorm();
    val -= psi.dot(tmp).real();
    return val;
}

double intensity_full(const FullSpaceOps& ops, const FullStateVector& psi) {
    FullStateVector tmp(psi.size());
    ops.apply_sminus(psi, tmp);
    return tmp.squaredNorm();
}

} // namespace dickesim
