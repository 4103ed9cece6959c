#include "dickesim/superop.hpp"

#include <Eigen/SparseLU>

#include <stdexcept>

namespace dickesim {

double inf_norm(const SparseMatrixXcd& mat) {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(mat.rows());
    for (int k = 0; k < mat.outerSize(); ++k)
        for (SparseMatrixXcd::InnerIterator it(mat, k); it; ++it)
            row_sums[it.row()] += std::abs(it.value());
    return row_sums.maxCoeff();
}

namespace {

void check_residual(const SparseMatrixXcd& liouvillian, const Eigen::VectorXcd& x,
                    double residual_tol, const char* who) {
    const double res = (liouvillian * x).template lpNorm<Eigen::Infinity>();
    const double scale = inf_norm(liouvillian);
    if (!(res <= residual_tol * scale))
        throw std::runtime_error(std::string(who) +
            ": steady-state residual " + std::to_string(res / scale) +
            " exceeds tolerance (possible numerical null-space degeneracy)");
}

} // namespace

Eigen::VectorXcd steady_state_lu(const SparseMatrixXcd& liouvillian,
                                 const TraceFunctional& trace,
                                 double residual_tol) {
    const int dim = static_cast<int>(liouvillian.rows());
    const int pivot_row = trace.indices.front();

    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(liouvillian.nonZeros() + trace.indices.size());
    for (int k = 0; k < liouvillian.outerSize(); ++k)
        for (SparseMatrixXcd::InnerIterator it(liouvillian, k); it; ++it)
            if (it.row() != pivot_row)
                trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (size_t k = 0; k < trace.indices.size(); ++k)
        trip.emplace_back(pivot_row, trace.indices[k], Complex(trace.weights[k], 0.0));

    SparseMatrixXcd sys(dim, dim);
    sys.setFromTriplets(trip.begin(), trip.end());
    sys.makeCompressed();

    Eigen::SparseLU<SparseMatrixXcd> lu(sys);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("steady_state_lu: factorization failed");
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
    rhs[pivot_row] = 1.0;
    Eigen::VectorXcd x = lu.solve(rhs);
    x /= trace.apply(x);
    check_residual(liouvillian, x, residual_tol, "steady_state_lu");
    return x;
}

Eigen::VectorXcd steady_state_inverse_iteration(const SparseMatrixXcd& liouvillian,
                                                const TraceFunctional& trace,
                                                double residual_tol) {
    const int dim = static_cast<int>(liouvillian.rows());
    const double sigma = 1e-8 * std::max(inf_norm(liouvillian), 1.0);

    SparseMatrixXcd shifted = liouvillian;
    SparseMatrixXcd eye(dim, dim);
    eye.setIdentity();
    shifted -= Complex(sigma, 0.0) * eye;
    Eigen::SparseLU<SparseMatrixXcd> lu(shifted);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("steady_state_inverse_iteration: factorization failed");

    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
    for (size_t k = 0; k < trace.indices.size(); ++k)
        x[trace.indices[k]] = trace.weights[k]; // identity-like start
    x /= x.norm();
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXcd y = lu.solve(x);
        y /= y.norm();
        const double change = (y - x * x.dot(y)).norm();
        x = y;
        if (change < 1e-13)
            break;
    }
    x /= trace.apply(x);
    check_residual(liouvillian, x, residual_tol, "steady_state_inverse_iteration");
    return x;
}

std::pair<Complex, Eigen::VectorXcd> eigenpair_near_shift(
    const SparseMatrixXcd& liouvillian, Complex sigma,
    const Eigen::VectorXcd& steady, const TraceFunctional& trace,
    int max_iter, double tol) {
    const int dim = static_cast<int>(liouvillian.rows());
    SparseMatrixXcd eye(dim, dim);
    eye.setIdentity();
    SparseMatrixXcd shifted = liouvillian;
    shifted -= sigma * eye;
    Eigen::SparseLU<SparseMatrixXcd> lu(shifted);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("eigenpair_near_shift: factorization failed");

    const Complex trace_steady = trace.apply(steady);
    auto deflate = [&](Eigen::VectorXcd& v) {
        // remove the lambda = 0 spectral component (oblique projection:
        // left eigenvector of 0 is the trace functional)
        v -= steady * (trace.apply(v) / trace_steady);
    };

    Eigen::VectorXcd x = Eigen::VectorXcd::Random(dim);
    deflate(x);
    x /= x.norm();
    Complex lambda = sigma;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd y = lu.solve(x);
        deflate(y);
        y /= y.norm();
        Eigen::VectorXcd ly = liouvillian * y;
        const Complex rq = y.dot(ly);
        const double resid = (ly - rq * y).norm();
        x = y;
        lambda = rq;
        if (resid < tol * inf_norm(liouvillian))
            break;
    }
    return {lambda, x};
}

} // namespace dickesim
