// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "bifuq/spatial.hpp"

namespace bifuq {

/// Full spectral decomposition; eigenvalues descending, eigenvectors as
/// orthonormal columns in matching order.
struct SymEigen {
    Vector values;
    Matrix vectors;
};

/// Implicit-shift QL on a symmetric tridiagonal operator.
///
/// Each eigenvector is normalized to unit Euclidean norm and signed so that
/// its largest-magnitude entry is positive (lowest index on exact ties).
/// Throws NumericalFailure carrying the eigenvalue index when the iteration
/// budget is exhausted.
SymEigen eig_sym_tridiag(const SymTridiag& t, int max_iterations_per_value = 60);

/// A bifurcation point (p*, 0) on the trivial branch together with the
/// kernel direction of the linearization there.
struct BifurcationPoint {
    int index = 1;  // 1-based: 1 is the rightmost eigenvalue
    double p_star = 0.0;
    Vector direction;
    std::vector<double> y;
};

/// The first k bifurcation points p*_i = -lambda_i(K + G(y)), i = 1..k.
/// For the homogeneous model G(y) = y_1 I, so the spectrum of K is shifted
/// rather than recomputed; this keeps directions identical across y.
std::vector<BifurcationPoint> bifurcation_points(const SpatialGrid& grid, const RandomFieldModel& field,
                                                 std::span<const double> y, int k);

/// Same point seeded in the opposite direction (the "-" branch).
BifurcationPoint mirrored(const BifurcationPoint& bif);

}  // namespace bifuq
