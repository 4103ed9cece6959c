#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <functional>

namespace dickesim {

using Complex = std::complex<double>;
using SparseMatrixXcd = Eigen::SparseMatrix<Complex>;

/// y = A x for the linear map being exponentiated.
using ApplyFn = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

/// One Arnoldi factorization A V_m = V_{m+1} H_m built from a start vector.
/// The basis grows incrementally: refine() adds columns only until the error
/// indicator at the requested step is met, so short steps stay cheap. Once
/// built, exp(tau A) v can be evaluated for any tau in [0, dt], which is what
/// the jump-time bisection in the trajectory unraveling needs.
class KrylovBasis {
public:
    KrylovBasis(ApplyFn apply, const Eigen::VectorXcd& v, int max_m);

    /// Grow the basis until the error indicator at tau drops below tol or the
    /// basis saturates at max_m; returns the final indicator.
    double refine(double tau, double tol);

    /// Approximation of exp(tau A) v.
    Eigen::VectorXcd eval(double tau) const;

    /// ||exp(tau A) v||^2 without reconstructing the full-dimensional vector,
    /// using the orthonormality of the Arnoldi basis.
    double eval_norm2(double tau) const;

    /// A-posteriori error indicator for the approximation at tau.
    double error_estimate(double tau) const;

    bool happy_breakdown() const { return breakdown_; }
    int m() const { return m_; }

private:
    void extend(int target_m);
    const Eigen::VectorXcd& coeffs(double tau) const;

    ApplyFn apply_;
    Eigen::MatrixXcd basis_;  // n x (max_m+1)
    Eigen::MatrixXcd hess_;   // (max_m+1) x max_m
    double beta_ = 0.0;
    int m_ = 0;
    int max_m_ = 0;
    bool breakdown_ = false;
    // cache for exp(tau H_m) e1 at the most recent (tau, m)
    mutable Eigen::VectorXcd coeff_u_;
    mutable double coeff_tau_ = 0.0;
    mutable int coeff_m_ = -1;
};

/// exp(t A) v with adaptive sub-stepping; tol is a relative accuracy target
/// per step. Works for the dissipative generators used throughout (spectra
/// in the closed left half-plane).
Eigen::VectorXcd krylov_expmv(const ApplyFn& apply, const Eigen::VectorXcd& v,
                              double t, double tol = 1e-9, int max_m = 36);

/// Convenience overload for a sparse matrix.
Eigen::VectorXcd krylov_expmv(const SparseMatrixXcd& mat, const Eigen::VectorXcd& v,
                              double t, double tol = 1e-9, int max_m = 36);

} // namespace dickesim
