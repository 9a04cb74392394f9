// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bifuq/eigen.hpp"
#include "bifuq/errors.hpp"
#include "oracles.hpp"

using namespace bifuq;
using std::numbers::pi;

namespace {

RandomFieldModel cosine_field() {
    return RandomFieldModel::cosine(Marginal::uniform(-1, 1), Marginal::uniform(-pi / 2, pi / 2));
}
RandomFieldModel homog() { return RandomFieldModel::homogeneous(Marginal::uniform(-1, 1)); }

}  // namespace

TEST(EigSymTridiag, LaplacianClosedForm) {
    for (int m : {5, 20, 100}) {
        const auto es = eig_sym_tridiag(assemble_laplacian(SpatialGrid(0.0, pi, m)));
        const auto ref = oracle::fd_laplacian_spectrum(0.0, pi, m);
        for (int j = 0; j < m; ++j) EXPECT_NEAR(es.values[j], ref[static_cast<std::size_t>(j)], 1e-10);
    }
}

TEST(EigSymTridiag, AgreesWithDenseSolverOnRandomTridiagonal) {
    Rng rng(5);
    SymTridiag t;
    const int m = 60;
    t.diag.resize(m);
    t.off.resize(m - 1);
    for (int j = 0; j < m; ++j) t.diag[j] = rng.uniform(-5, 5);
    for (int j = 0; j < m - 1; ++j) t.off[j] = rng.uniform(-2, 2);
    const auto es = eig_sym_tridiag(t);
    const Vector ref = oracle::dense_eigenvalues_desc(t.dense());
    EXPECT_LT((es.values - ref).cwiseAbs().maxCoeff(), 1e-12);
    const Matrix a = t.dense();
    EXPECT_LT((a * es.vectors - es.vectors * es.values.asDiagonal()).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(EigSymTridiag, DiagonalCase) {
    SymTridiag t;
    t.diag = Vector::LinSpaced(4, 1.0, 4.0);
    t.diag[1] = -3.0;  // diag = (1, -3, 3, 4)
    t.off = Vector::Zero(3);
    const auto es = eig_sym_tridiag(t);
    EXPECT_EQ(es.values[0], 4.0);
    EXPECT_EQ(es.values[1], 3.0);
    EXPECT_EQ(es.values[2], 1.0);
    EXPECT_EQ(es.values[3], -3.0);
    EXPECT_EQ(es.vectors(3, 0), 1.0);
    EXPECT_EQ(es.vectors(1, 3), 1.0);
    EXPECT_EQ(es.vectors.col(0).cwiseAbs().sum(), 1.0);
}

TEST(EigSymTridiag, OrthonormalAndSorted) {
    const auto es = eig_sym_tridiag(assemble_laplacian(SpatialGrid(0.0, 1.0, 80)));
    const Matrix gram = es.vectors.transpose() * es.vectors;
    EXPECT_LT((gram - Matrix::Identity(80, 80)).cwiseAbs().maxCoeff(), 1e-10);
    for (int j = 1; j < 80; ++j) EXPECT_GE(es.values[j - 1], es.values[j]);
}

TEST(EigSymTridiag, SignConvention) {
    const auto es = eig_sym_tridiag(assemble_laplacian(SpatialGrid(0.0, pi, 31)));
    for (int c = 0; c < 31; ++c) {
        Eigen::Index arg;
        es.vectors.col(c).cwiseAbs().maxCoeff(&arg);
        EXPECT_GT(es.vectors(arg, c), 0.0) << c;
    }
}

TEST(EigSymTridiag, ZeroIterationBudgetFailsWithIndex) {
    const auto t = assemble_laplacian(SpatialGrid(0.0, pi, 10));
    try {
        eig_sym_tridiag(t, 0);
        FAIL() << "expected NumericalFailure";
    } catch (const NumericalFailure& e) {
        EXPECT_GE(e.index(), 0);
        EXPECT_LT(e.index(), 10);
    }
}

TEST(BifurcationPoints, DeterministicValuesNearSquares) {
    const SpatialGrid g(0.0, pi, 100);
    const std::vector<double> y{0.0};
    const auto bif = bifurcation_points(g, homog(), y, 3);
    ASSERT_EQ(bif.size(), 3u);
    for (int i = 1; i <= 3; ++i) {
        EXPECT_NEAR(bif[static_cast<std::size_t>(i - 1)].p_star, i * i, 1e-2);
        EXPECT_EQ(bif[static_cast<std::size_t>(i - 1)].index, i);
    }
}

TEST(BifurcationPoints, KernelResidualAndNorm) {
    const SpatialGrid g(0.0, pi, 100);
    const std::vector<double> y{0.7, -1.3};
    const DiscreteSystem sys(g, cosine_field(), y);
    for (const auto& b : bifurcation_points(g, cosine_field(), y, 4)) {
        EXPECT_NEAR(b.direction.norm(), 1.0, 1e-14);
        EXPECT_LE(jacobian(sys, b.p_star, Vector::Zero(100)).apply(b.direction).norm(), 1e-8);
    }
}

TEST(BifurcationPoints, HomogeneousShiftEquivariance) {
    const SpatialGrid g(0.0, pi, 60);
    const std::vector<double> c1{0.37}, c2{-0.81}, zero{0.0};
    const auto b1 = bifurcation_points(g, homog(), c1, 5);
    const auto b2 = bifurcation_points(g, homog(), c2, 5);
    const auto b0 = bifurcation_points(g, homog(), zero, 5);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_NEAR(b1[i].p_star - b2[i].p_star, c2[0] - c1[0], 1e-12);
        EXPECT_NEAR(b1[i].p_star, b0[i].p_star - c1[0], 1e-12);
        EXPECT_EQ(b1[i].direction, b0[i].direction);
    }
}

TEST(BifurcationPoints, CosineWithZeroAmplitudeMatchesDeterministic) {
    const SpatialGrid g(0.0, pi, 40);
    const std::vector<double> yc{0.0, 1.234}, yh{0.0};
    const auto bc = bifurcation_points(g, cosine_field(), yc, 3);
    const auto bh = bifurcation_points(g, homog(), yh, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(bc[i].p_star, bh[i].p_star, 1e-12);
        EXPECT_LT((bc[i].direction - bh[i].direction).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(BifurcationPoints, WeylBracketing) {
    const SpatialGrid g(0.0, pi, 50);
    const std::vector<double> zero{0.0, 0.0};
    const auto b0 = bifurcation_points(g, cosine_field(), zero, 3);
    Rng rng(9);
    for (int k = 0; k < 50; ++k) {
        const std::vector<double> y{rng.uniform(-1, 1), rng.uniform(-pi / 2, pi / 2)};
        const auto b = bifurcation_points(g, cosine_field(), y, 3);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(std::abs(b[i].p_star - b0[i].p_star), std::abs(y[0]) + 1e-10);
    }
}

TEST(BifurcationPoints, BitwiseRepeatable) {
    const SpatialGrid g(0.0, pi, 70);
    const std::vector<double> y{0.3, 0.8};
    const auto a = bifurcation_points(g, cosine_field(), y, 3);
    const auto b = bifurcation_points(g, cosine_field(), y, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(a[i].p_star, b[i].p_star);
        EXPECT_EQ(a[i].direction, b[i].direction);
    }
}

TEST(BifurcationPoints, CountPrecondition) {
    const SpatialGrid g(0.0, pi, 5);
    const std::vector<double> y{0.0};
    EXPECT_THROW(bifurcation_points(g, homog(), y, 6), ContractViolation);
    EXPECT_THROW(bifurcation_points(g, homog(), y, 0), ContractViolation);
}

TEST(BifurcationPoints, Mirrored) {
    const SpatialGrid g(0.0, pi, 10);
    const std::vector<double> y{0.0};
    const auto b = bifurcation_points(g, homog(), y, 1)[0];
    const auto mb = mirrored(b);
    EXPECT_EQ(mb.p_star, b.p_star);
    EXPECT_EQ(mb.direction, -b.direction);
}
