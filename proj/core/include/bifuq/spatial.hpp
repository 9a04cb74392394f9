// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "bifuq/marginal.hpp"

namespace bifuq {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Symmetric tridiagonal m x m operator stored by its diagonal and the
/// m-1 entries of the first off-diagonal.
struct SymTridiag {
    Vector diag;
    Vector off;

    Eigen::Index size() const { return diag.size(); }
    Vector apply(const Vector& v) const;
    Matrix dense() const;
};

/// Uniform grid on [a,b] carrying only the m interior nodes. The Dirichlet
/// values u(a) = u(b) = 0 are implicit.
class SpatialGrid {
public:
    SpatialGrid(double a, double b, int m);

    double a() const { return a_; }
    double b() const { return b_; }
    int m() const { return m_; }
    double h() const { return h_; }
    const std::vector<double>& nodes() const { return nodes_; }
    double node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }

    /// Index of the interior node closest to x (lowest index on ties).
    int nearest_node(double x) const;

private:
    double a_;
    double b_;
    int m_;
    double h_;
    std::vector<double> nodes_;
};

enum class FieldKind { Homogeneous, CosineHeterogeneous };

/// The random perturbation g(x, y) of the linear coefficient:
///   Homogeneous:          g(x, y) = y_1
///   CosineHeterogeneous:  g(x, y) = y_1 cos(y_2 x)
struct RandomFieldModel {
    FieldKind kind = FieldKind::Homogeneous;
    std::vector<Marginal> marginals;

    static RandomFieldModel homogeneous(Marginal y);
    static RandomFieldModel cosine(Marginal amplitude, Marginal frequency);

    int dim() const { return static_cast<int>(marginals.size()); }

    /// Throws DomainError when y has the wrong length or leaves the support.
    void check_realization(std::span<const double> y) const;

    double value(double x, std::span<const double> y) const;

    /// Upper bound of |g(x, y)| over x for the given realization.
    double sup_norm(std::span<const double> y) const;
};

/// A realization of the discretized problem: grid, field model and the
/// point y in the stochastic domain. The field values at the nodes are
/// evaluated once at construction.
class DiscreteSystem {
public:
    DiscreteSystem(SpatialGrid grid, RandomFieldModel field, std::vector<double> y);

    const SpatialGrid& grid() const { return grid_; }
    const RandomFieldModel& field() const { return field_; }
    const std::vector<double>& y() const { return y_; }
    const Vector& field_values() const { return g_; }
    int m() const { return grid_.m(); }

private:
    SpatialGrid grid_;
    RandomFieldModel field_;
    std::vector<double> y_;
    Vector g_;
};

/// Central second-difference Laplacian with eliminated Dirichlet rows:
/// diagonal -2/h^2, off-diagonals 1/h^2.
SymTridiag assemble_laplacian(const SpatialGrid& grid);

/// g(x_j, y) at every interior node.
Vector eval_field(const SpatialGrid& grid, const RandomFieldModel& field, std::span<const double> y);
inline Vector eval_field(const DiscreteSystem& system) { return system.field_values(); }

/// F(p, u) = K u + p u + G(y) u - u^3.
Vector residual(const DiscreteSystem& system, double p, const Vector& u);

/// D_u F(p, u) = K + p I + G(y) - 3 diag(u^2).
SymTridiag jacobian(const DiscreteSystem& system, double p, const Vector& u);

}  // namespace bifuq
