#include "dickesim/block_matrix.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dickesim;

namespace {

BlockDensityMatrix random_state(const DickeLadder& ladder, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    BlockDensityMatrix rho(ladder);
    for (int b = 0; b < ladder.n_blocks(); ++b) {
        MatrixXcd g(ladder.block_dim(b), ladder.block_dim(b));
        for (int r = 0; r < g.rows(); ++r)
            for (int c = 0; c < g.cols(); ++c)
                g(r, c) = Complex(gauss(rng), gauss(rng));
        rho.block(b) = g * g.adjoint();
    }
    const double tr = rho.trace(ladder).real();
    rho.scale(1.0 / tr);
    return rho;
}

} // namespace

TEST_CASE("ground and mixed states") {
    for (int n : {2, 5, 12}) {
        DickeLadder ladder(n);
        const auto ground = BlockDensityMatrix::ground_state(ladder);
        CHECK(ground.trace(ladder).real() == doctest::Approx(1.0));
        CHECK(ground.expectation(ladder, CollectiveOp::Sz).real() ==
              doctest::Approx(-0.5 * n));

        const auto mixed = BlockDensityMatrix::totally_mixed(ladder);
        CHECK(mixed.trace(ladder).real() == doctest::Approx(1.0));
        CHECK(mixed.expectation(ladder, CollectiveOp::Sz).real() ==
              doctest::Approx(0.0).epsilon(1e-12));
        // <S^2> = 3N/4 on the uniform mixture
        CHECK(mixed.expectation(ladder, CollectiveOp::Ssquared).real() ==
              doctest::Approx(0.75 * n));
    }
}

TEST_CASE("vectorization round trip") {
    DickeLadder ladder(7);
    const auto rho = random_state(ladder, 42);
    const auto v = rho.vectorize(ladder);
    REQUIRE(v.size() == ladder.vectorized_dim());
    const auto back = BlockDensityMatrix::from_vector(ladder, v);
    for (int b = 0; b < ladder.n_blocks(); ++b)
        CHECK((rho.block(b) - back.block(b)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hs inner product and hermiticity") {
    DickeLadder ladder(6);
    auto rho = random_state(ladder, 7);
    const auto sigma = random_state(ladder, 8);

    // purity is real and positive
    const Complex pp = rho.hs_inner(rho, ladder);
    CHECK(pp.imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(pp.real() > 0.0);
    // <rho, sigma> = conj(<sigma, rho>)
    const Complex a = rho.hs_inner(sigma, ladder);
    const Complex b = sigma.hs_inner(rho, ladder);
    CHECK(std::abs(a - std::conj(b)) < 1e-14);

    rho.block(0)(0, 1) += Complex(0.0, 0.5);
    CHECK(rho.max_hermiticity_defect() > 0.4);
    rho.hermitize();
    CHECK(rho.max_hermiticity_defect() < 1e-15);
}

TEST_CASE("expectation_product matches explicit matrices") {
    DickeLadder ladder(4);
    const auto rho = random_state(ladder, 3);
    Complex expected = 0.0;
    for (int b = 0; b < ladder.n_blocks(); ++b) {
        const auto sp = ladder.block_operator(b, CollectiveOp::Splus);
        const auto sm = ladder.block_operator(b, CollectiveOp::Sminus);
        expected += ladder.block_weight(b) * (sp * sm * rho.block(b)).trace();
    }
    const Complex got =
        rho.expectation_product(ladder, {CollectiveOp::Splus, CollectiveOp::Sminus});
    CHECK(std::abs(got - expected) < 1e-13);
}

TEST_CASE("symmetric_pure validates amplitude count") {
    DickeLadder ladder(4);
    VectorXcd amps = VectorXcd::Zero(5);
    amps(0) = 1.0;
    const auto rho = BlockDensityMatrix::symmetric_pure(ladder, amps);
    CHECK(rho.trace(ladder).real() == doctest::Approx(1.0));
    CHECK_THROWS_AS(BlockDensityMatrix::symmetric_pure(ladder, VectorXcd::Zero(4)),
                    std::invalid_argument);
}
