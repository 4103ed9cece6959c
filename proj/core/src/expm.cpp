#include "dickesim/expm.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dickesim {

KrylovBasis::KrylovBasis(ApplyFn apply, const Eigen::VectorXcd& v, int max_m)
    : apply_(std::move(apply)), max_m_(std::max(1, max_m)) {
    const Eigen::Index n = v.size();
    beta_ = v.norm();
    basis_.resize(n, max_m_ + 1); // columns are written before they are read
    hess_ = Eigen::MatrixXcd::Zero(max_m_ + 1, max_m_);
    if (beta_ == 0.0) {
        m_ = 1;
        breakdown_ = true;
        return;
    }
    basis_.col(0) = v / beta_;
    extend(std::min(4, max_m_));
}

void KrylovBasis::extend(int target_m) {
    Eigen::VectorXcd w(basis_.rows());
    for (int k = m_; k < target_m && !breakdown_; ++k) {
        apply_(basis_.col(k), w);
        // modified Gram-Schmidt with one reorthogonalization pass
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= k; ++i) {
                const Complex h = basis_.col(i).dot(w);
                hess_(i, k) += h;
                w -= h * basis_.col(i);
            }
        }
        const double hk = w.norm();
        hess_(k + 1, k) = hk;
        m_ = k + 1;
        if (hk < 1e-13 * beta_) {
            breakdown_ = true;
            return;
        }
        basis_.col(k + 1) = w / hk;
    }
}

double KrylovBasis::refine(double tau, double tol) {
    // The indicator can be spuriously small while the basis is still far too
    // small for tau, so a passing estimate only counts once a subsequent
    // extension confirms it. The saturated basis is trusted as-is.
    double est = error_estimate(tau);
    bool confirmed = false;
    while (!breakdown_ && m_ < max_m_) {
        if (est <= tol && confirmed)
            return est;
        const bool was_ok = est <= tol;
        extend(std::min(m_ + (was_ok ? 2 : 4), max_m_));
        const double next = error_estimate(tau);
        confirmed = was_ok && next <= tol;
        est = next;
    }
    return est;
}

const Eigen::VectorXcd& KrylovBasis::coeffs(double tau) const {
    if (coeff_m_ != m_ || coeff_tau_ != tau) {
        const Eigen::MatrixXcd Hm = hess_.topLeftCorner(m_, m_);
        const Eigen::MatrixXcd E = (tau * Hm).exp();
        coeff_u_ = E.col(0);
        coeff_tau_ = tau;
        coeff_m_ = m_;
    }
    return coeff_u_;
}

Eigen::VectorXcd KrylovBasis::eval(double tau) const {
    if (beta_ == 0.0)
        return Eigen::VectorXcd::Zero(basis_.rows());
    return beta_ * (basis_.leftCols(m_) * coeffs(tau));
}

double KrylovBasis::eval_norm2(double tau) const {
    if (beta_ == 0.0)
        return 0.0;
    return beta_ * beta_ * coeffs(tau).squaredNorm();
}

double KrylovBasis::error_estimate(double tau) const {
    if (breakdown_ || beta_ == 0.0)
        return 0.0;
    return beta_ * std::abs(hess_(m_, m_ - 1)) * std::abs(coeffs(tau)[m_ - 1]) * tau;
}

Eigen::VectorXcd krylov_expmv(const ApplyFn& apply, const Eigen::VectorXcd& v,
                              double t, double tol, int max_m) {
    Eigen::VectorXcd x = v;
    if (t == 0.0 || x.norm() == 0.0)
        return x;
    double done = 0.0;
    double dt = t;
    int guard = 0;
    while (done < t) {
        if (++guard > 1000000)
            throw std::runtime_error("krylov_expmv: step-size collapse at t = " + std::to_string(done));
        dt = std::min(dt, t - done);
        KrylovBasis kb(apply, x, max_m);
        const double scale = x.norm();
        while (kb.refine(dt, tol * scale) > tol * scale && dt > 1e-300)
            dt *= 0.5;
        x = kb.eval(dt);
        done += dt;
        dt *= 1.5; // cautious growth for the next step
    }
    return x;
}

Eigen::VectorXcd krylov_expmv(const SparseMatrixXcd& mat, const Eigen::VectorXcd& v,
                              double t, double tol, int max_m) {
    auto apply = [&mat](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { out = mat * in; };
    return krylov_expmv(apply, v, t, tol, max_m);
}

} // namespace dickesim
