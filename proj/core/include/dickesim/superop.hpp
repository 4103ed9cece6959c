#pragma once

#include "dickesim/expm.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

namespace dickesim {

/// Linear functional tr(rho) on a vectorized density matrix: a sparse list
/// of (index, weight) pairs. Weights are the block degeneracies in the
/// permutation-invariant representation and 1 in the full-space one.
struct TraceFunctional {
    std::vector<int> indices;
    std::vector<double> weights;

    Complex apply(const Eigen::VectorXcd& v) const {
        Complex t = 0.0;
        for (size_t k = 0; k < indices.size(); ++k)
            t += weights[k] * v[indices[k]];
        return t;
    }
};

/// Null-vector of a trace-preserving generator L (rho_dot = L rho), found by
/// sparse LU after replacing one row of L with the trace row. The result is
/// normalized to unit trace. Throws if the residual check fails.
Eigen::VectorXcd steady_state_lu(const SparseMatrixXcd& liouvillian,
                                 const TraceFunctional& trace,
                                 double residual_tol = 1e-10);

/// Same null-vector via inverse (shift-invert) iteration at a tiny shift;
/// used as the independent cross-check of steady_state_lu.
Eigen::VectorXcd steady_state_inverse_iteration(const SparseMatrixXcd& liouvillian,
                                                const TraceFunctional& trace,
                                                double residual_tol = 1e-10);

/// Eigenpair of L nearest the (real) shift sigma, excluding the steady-state
/// direction, via shift-inverted power iteration with oblique deflation of
/// the lambda = 0 mode (right vector: steady state; left vector: trace).
/// Returns (eigenvalue, eigenvector); the eigenvector is unnormalized.
std::pair<Complex, Eigen::VectorXcd> eigenpair_near_shift(
    const SparseMatrixXcd& liouvillian, Complex sigma,
    const Eigen::VectorXcd& steady, const TraceFunctional& trace,
    int max_iter = 200, double tol = 1e-11);

/// Maximum absolute row sum of a sparse matrix (infinity norm).
double inf_norm(const SparseMatrixXcd& mat);

} // namespace dickesim
