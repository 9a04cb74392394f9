// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <vector>

#include "bifuq/errors.hpp"
#include "bifuq/gpc.hpp"
#include "bifuq/sparse_grid.hpp"
#include "oracles.hpp"

using namespace bifuq;
using std::numbers::pi;

namespace {

std::vector<Marginal> unit_square() { return {Marginal::uniform(-1, 1), Marginal::uniform(-1, 1)}; }
std::vector<Marginal> paper_box() { return {Marginal::uniform(-1, 1), Marginal::uniform(-pi / 2, pi / 2)}; }

Vector values_of(const SparseGridApprox& sg, double (*f)(double, double)) {
    Vector v(static_cast<Eigen::Index>(sg.size()));
    for (std::size_t k = 0; k < sg.size(); ++k) v[static_cast<Eigen::Index>(k)] = f(sg.points[k][0], sg.points[k][1]);
    return v;
}

double interp(const SparseGridApprox& sg, const Vector& v, std::span<const double> y) {
    return interpolate(sg, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), y);
}

}  // namespace

TEST(SymmetricLeja, FirstThree) {
    EXPECT_EQ(symmetric_leja(3), (std::vector<double>{0.0, 1.0, -1.0}));
    EXPECT_EQ(symmetric_leja(1), (std::vector<double>{0.0}));
}

TEST(SymmetricLeja, MatchesBruteForceOracle) {
    const auto ref = oracle::brute_force_symmetric_leja(33, 50000);
    const auto got = symmetric_leja(33);
    ASSERT_EQ(got.size(), ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_EQ(got[k], ref[k]) << k;
}

TEST(SymmetricLeja, SymmetricAndNested) {
    const auto a = symmetric_leja(25);
    const auto b = symmetric_leja(41);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
    for (int k = 1; 2 * k + 1 <= 41; ++k) {
        std::multiset<double> pos, neg;
        for (int j = 0; j < 2 * k + 1; ++j) {
            pos.insert(b[static_cast<std::size_t>(j)]);
            neg.insert(-b[static_cast<std::size_t>(j)]);
        }
        EXPECT_EQ(pos, neg);
    }
}

TEST(SymmetricLeja, WellSeparated) {
    auto pts = symmetric_leja(33);
    std::sort(pts.begin(), pts.end());
    for (std::size_t k = 1; k < pts.size(); ++k) EXPECT_GT(pts[k] - pts[k - 1], 1e-3);
}

TEST(LevelToKnots, Values) {
    EXPECT_EQ(level_to_knots(1), 1);
    EXPECT_EQ(level_to_knots(2), 3);
    EXPECT_EQ(level_to_knots(4), 7);
    EXPECT_THROW(level_to_knots(0), ContractViolation);
}

TEST(TotalDegreeLevels, SmallCases) {
    const auto s0 = total_degree_levels(2, 0);
    ASSERT_EQ(s0.size(), 1u);
    EXPECT_EQ(s0[0], (MultiIndex{1, 1}));
    const auto s1 = total_degree_levels(1, 4);
    ASSERT_EQ(s1.size(), 5u);
    for (int k = 0; k < 5; ++k) EXPECT_EQ(s1[static_cast<std::size_t>(k)], (MultiIndex{k + 1}));
}

TEST(TotalDegreeLevels, CountsAgainstEnumeration) {
    for (int w = 0; w <= 8; ++w) {
        std::vector<MultiIndex> brute;
        for (int a = 1; a <= w + 1; ++a)
            for (int b = 1; b <= w + 1; ++b)
                for (int c = 1; c <= w + 1; ++c)
                    if ((a - 1) + (b - 1) + (c - 1) <= w) brute.push_back({a, b, c});
        const auto s = total_degree_levels(3, w);
        EXPECT_EQ(s.indices(), brute) << w;
        EXPECT_TRUE(s.is_downward_closed());
    }
    EXPECT_EQ(total_degree_levels(2, 3).size(), 10u);
}

TEST(MultiIndexSet, CanonicalOrderAndLookup) {
    const MultiIndexSet s(2, {{2, 1}, {1, 1}, {1, 2}, {2, 1}}, IndexKind::Levels);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0], (MultiIndex{1, 1}));
    EXPECT_EQ(s[2], (MultiIndex{2, 1}));
    EXPECT_EQ(s.find({1, 2}), std::optional<std::size_t>(1));
    EXPECT_FALSE(s.contains({3, 3}));
    EXPECT_TRUE(s.is_downward_closed());
    EXPECT_FALSE(MultiIndexSet(2, {{1, 1}, {3, 1}}, IndexKind::Levels).is_downward_closed());
    EXPECT_THROW(MultiIndexSet(2, {{0, 1}}, IndexKind::Levels), ContractViolation);
}

TEST(CombinationCoefficients, Examples) {
    EXPECT_EQ(combination_coefficients(total_degree_levels(2, 0)), std::vector<int>{1});
    const auto s = total_degree_levels(2, 1);  // (1,1), (1,2), (2,1)
    EXPECT_EQ(combination_coefficients(s), (std::vector<int>{-1, 1, 1}));
    for (int dim : {1, 2, 3})
        for (int w = 0; w <= 5; ++w) {
            const auto c = combination_coefficients(total_degree_levels(dim, w));
            EXPECT_EQ(std::accumulate(c.begin(), c.end(), 0), 1);
        }
    EXPECT_THROW(combination_coefficients(MultiIndexSet(2, {{1, 1}, {1, 3}}, IndexKind::Levels)), ContractViolation);
}

TEST(CombinationCoefficients, BruteForceSignedSum) {
    const auto s = total_degree_levels(3, 4);
    const auto c = combination_coefficients(s);
    for (std::size_t k = 0; k < s.size(); ++k) {
        int ref = 0;
        for (int mask = 0; mask < 8; ++mask) {
            MultiIndex j = s[k];
            int bits = 0;
            for (int d = 0; d < 3; ++d)
                if (mask & (1 << d)) {
                    ++j[static_cast<std::size_t>(d)];
                    ++bits;
                }
            if (s.contains(j)) ref += (bits % 2 ? -1 : 1);
        }
        EXPECT_EQ(c[k], ref);
    }
}

TEST(BuildSparseGrid, TwentyFivePoints) {
    const auto sg = build_sparse_grid(2, 3, paper_box());
    EXPECT_EQ(sg.size(), 25u);
    std::set<std::vector<double>> unique(sg.points.begin(), sg.points.end());
    EXPECT_EQ(unique.size(), 25u);
}

TEST(BuildSparseGrid, PointCountEqualsLambda) {
    for (int w = 0; w <= 5; ++w) {
        const auto sg = build_sparse_grid(2, w, unit_square());
        EXPECT_EQ(sg.size(), induced_lambda(total_degree_levels(2, w)).size()) << w;
    }
}

TEST(BuildSparseGrid, OneDimensionalIsLejaPrefix) {
    const std::vector<Marginal> m{Marginal::uniform(2.0, 4.0)};
    const auto sg = build_sparse_grid(1, 2, m);
    const auto leja = symmetric_leja(5);
    ASSERT_EQ(sg.size(), 5u);
    std::vector<double> got, ref;
    for (const auto& p : sg.points) got.push_back(p[0]);
    for (double t : leja) ref.push_back(3.0 + t);
    std::sort(got.begin(), got.end());
    std::sort(ref.begin(), ref.end());
    for (std::size_t k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(got[k], ref[k]);
}

TEST(BuildSparseGrid, LevelZeroIsCenter) {
    const auto sg = build_sparse_grid(2, 0, paper_box());
    ASSERT_EQ(sg.size(), 1u);
    EXPECT_EQ(sg.points[0], (std::vector<double>{0.0, 0.0}));
}

TEST(BuildSparseGrid, DegenerateMarginal) {
    const std::vector<Marginal> m{Marginal::uniform(0.0, 0.0), Marginal::uniform(-1, 1)};
    const auto sg = build_sparse_grid(2, 2, m);
    for (const auto& p : sg.points) EXPECT_EQ(p[0], 0.0);
}

TEST(BuildSparseGrid, RejectsNonUniform) {
    const std::vector<Marginal> m{Marginal::truncated_gaussian(0, 0.3, -1, 1)};
    EXPECT_THROW(build_sparse_grid(1, 2, m), UnsupportedOperation);
}

TEST(Interpolate, ReproducesNodalValues) {
    const auto sg = build_sparse_grid(2, 3, paper_box());
    const Vector v = values_of(sg, [](double a, double b) { return std::exp(a) * std::cos(b); });
    for (std::size_t k = 0; k < sg.size(); ++k) EXPECT_NEAR(interp(sg, v, sg.points[k]), v[static_cast<Eigen::Index>(k)], 1e-12);
}

TEST(Interpolate, PartitionOfUnity) {
    const auto sg = build_sparse_grid(2, 4, paper_box());
    const Vector ones = Vector::Ones(static_cast<Eigen::Index>(sg.size()));
    Rng rng(2);
    for (int k = 0; k < 50; ++k) {
        const std::vector<double> y{rng.uniform(-1, 1), rng.uniform(-pi / 2, pi / 2)};
        EXPECT_NEAR(interp(sg, ones, y), 1.0, 1e-12);
    }
}

TEST(Interpolate, PolynomialExactness) {
    const auto sg = build_sparse_grid(2, 3, unit_square());
    const Vector v = values_of(sg, [](double a, double b) { return a * a * a * b * b; });
    Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        const std::vector<double> y{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        EXPECT_NEAR(interp(sg, v, y), y[0] * y[0] * y[0] * y[1] * y[1], 1e-12);
    }
}

TEST(Interpolate, Linearity) {
    const auto sg = build_sparse_grid(2, 3, paper_box());
    const Vector v1 = values_of(sg, [](double a, double b) { return std::sin(a + b); });
    const Vector v2 = values_of(sg, [](double a, double b) { return a * b * b; });
    const std::vector<double> y{0.31, -0.77};
    EXPECT_NEAR(interp(sg, 2.5 * v1 - 0.5 * v2, y), 2.5 * interp(sg, v1, y) - 0.5 * interp(sg, v2, y), 1e-13);
}

TEST(Interpolate, VectorValuedMatchesComponents) {
    const auto sg = build_sparse_grid(2, 2, paper_box());
    Matrix vals(2, static_cast<Eigen::Index>(sg.size()));
    vals.row(0) = values_of(sg, [](double a, double b) { return a + b; }).transpose();
    vals.row(1) = values_of(sg, [](double a, double b) { return a * b; }).transpose();
    const std::vector<double> y{0.2, 0.4};
    const Vector r = interpolate(sg, vals, y);
    EXPECT_NEAR(r[0], interp(sg, vals.row(0).transpose(), y), 1e-15);
    EXPECT_NEAR(r[1], interp(sg, vals.row(1).transpose(), y), 1e-15);
}

TEST(Interpolate, Errors) {
    const auto sg = build_sparse_grid(2, 2, paper_box());
    const Vector v = Vector::Zero(3);
    const std::vector<double> y{0.0, 0.0}, out{2.0, 0.0};
    EXPECT_THROW(interp(sg, v, y), ContractViolation);
    const Vector ok = Vector::Zero(static_cast<Eigen::Index>(sg.size()));
    EXPECT_THROW(interp(sg, ok, out), DomainError);
}

TEST(LagrangeWeights, KroneckerAtNodes) {
    const auto nodes = symmetric_leja(7);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto w = lagrange_weights(nodes, nodes[k]);
        for (std::size_t j = 0; j < nodes.size(); ++j) EXPECT_EQ(w[j], j == k ? 1.0 : 0.0);
    }
}
