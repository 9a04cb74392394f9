// SPDX-License-Identifier: Apache-2.0
#include "bifuq/spatial.hpp"

#include <cmath>
#include <string>

#include "bifuq/errors.hpp"

namespace bifuq {

Vector SymTridiag::apply(const Vector& v) const {
    const Eigen::Index m = size();
    if (v.size() != m) throw ContractViolation("spatial", "operator/vector size mismatch");
    Vector out = diag.cwiseProduct(v);
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
        out[j] += off[j] * v[j + 1];
        out[j + 1] += off[j] * v[j];
    }
    return out;
}

Matrix SymTridiag::dense() const {
    const Eigen::Index m = size();
    Matrix a = Matrix::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) a(j, j) = diag[j];
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
        a(j, j + 1) = off[j];
        a(j + 1, j) = off[j];
    }
    return a;
}

SpatialGrid::SpatialGrid(double a, double b, int m) : a_(a), b_(b), m_(m) {
    if (m < 1) throw ContractViolation("spatial", "grid needs at least one interior point");
    if (!(b > a)) throw ContractViolation("spatial", "grid needs a < b");
    h_ = (b - a) / (m + 1);
    nodes_.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) nodes_[static_cast<std::size_t>(j)] = a + (j + 1) * h_;
}

int SpatialGrid::nearest_node(double x) const {
    int best = 0;
    double best_dist = std::abs(nodes_[0] - x);
    for (int j = 1; j < m_; ++j) {
        const double d = std::abs(nodes_[static_cast<std::size_t>(j)] - x);
        if (d < best_dist) {
            best = j;
            best_dist = d;
        }
    }
    return best;
}

RandomFieldModel RandomFieldModel::homogeneous(Marginal y) {
    return RandomFieldModel{FieldKind::Homogeneous, {y}};
}

RandomFieldModel RandomFieldModel::cosine(Marginal amplitude, Marginal frequency) {
    return RandomFieldModel{FieldKind::CosineHeterogeneous, {amplitude, frequency}};
}

void RandomFieldModel::check_realization(std::span<const double> y) const {
    const std::size_t expected = kind == FieldKind::Homogeneous ? 1 : 2;
    if (marginals.size() != expected)
        throw ContractViolation("spatial", "field model has " + std::to_string(marginals.size()) +
                                               " marginals, expected " + std::to_string(expected));
    if (y.size() != expected)
        throw DomainError("spatial", "realization has length " + std::to_string(y.size()) + ", expected " +
                                         std::to_string(expected));
    for (std::size_t n = 0; n < y.size(); ++n) {
        if (!marginals[n].contains(y[n]))
            throw DomainError("spatial", "realization component " + std::to_string(n + 1) + " = " +
                                             std::to_string(y[n]) + " outside " + marginals[n].describe());
    }
}

double RandomFieldModel::value(double x, std::span<const double> y) const {
    if (kind == FieldKind::Homogeneous) return y[0];
    return y[0] * std::cos(y[1] * x);
}

double RandomFieldModel::sup_norm(std::span<const double> y) const { return std::abs(y[0]); }

DiscreteSystem::DiscreteSystem(SpatialGrid grid, RandomFieldModel field, std::vector<double> y)
    : grid_(std::move(grid)), field_(std::move(field)), y_(std::move(y)) {
    g_ = eval_field(grid_, field_, y_);
}

SymTridiag assemble_laplacian(const SpatialGrid& grid) {
    const int m = grid.m();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    SymTridiag k;
    k.diag = Vector::Constant(m, -2.0 * inv_h2);
    k.off = Vector::Constant(m - 1, inv_h2);
    return k;
}

Vector eval_field(const SpatialGrid& grid, const RandomFieldModel& field, std::span<const double> y) {
    field.check_realization(y);
    Vector g(grid.m());
    for (int j = 0; j < grid.m(); ++j) g[j] = field.value(grid.node(j), y);
    return g;
}

Vector residual(const DiscreteSystem& system, double p, const Vector& u) {
    if (u.size() != system.m()) throw ContractViolation("spatial", "state length does not match grid");
    const double inv_h2 = 1.0 / (system.grid().h() * system.grid().h());
    const Vector& g = system.field_values();
    const Eigen::Index m = u.size();
    Vector f(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double left = j > 0 ? u[j - 1] : 0.0;
        const double right = j + 1 < m ? u[j + 1] : 0.0;
        const double uj = u[j];
        f[j] = (left - 2.0 * uj + right) * inv_h2 + p * uj + g[j] * uj - uj * uj * uj;
    }
    return f;
}

SymTridiag jacobian(const DiscreteSystem& system, double p, const Vector& u) {
    if (u.size() != system.m()) throw ContractViolation("spatial", "state length does not match grid");
    SymTridiag j = assemble_laplacian(system.grid());
    j.diag.array() += p + system.field_values().array() - 3.0 * u.array().square();
    return j;
}

}  // namespace bifuq
