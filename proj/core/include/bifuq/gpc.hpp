// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "bifuq/sparse_grid.hpp"

namespace bifuq {

/// Legendre polynomial of the given degree, scaled to be orthonormal under
/// the uniform probability measure on [-1,1]: psi_a = sqrt(2a+1) P_a.
double legendre_orthonormal(int degree, double t);

/// psi_0(t) .. psi_max_degree(t) by the three-term recurrence.
std::vector<double> legendre_orthonormal_all(int max_degree, double t);

/// Degree set induced by a level set: union over i in I of the boxes
/// {alpha : alpha_n <= m(i_n) - 1}.
MultiIndexSet induced_lambda(const MultiIndexSet& levels, const LevelToKnots& knots = level_to_knots);

/// Truncated expansion sum_alpha c_alpha psi_alpha(y) over a product
/// Legendre basis. coeffs has one column per element of lambda; each row is
/// one component of the (possibly vector-valued) quantity.
struct GpcExpansion {
    MultiIndexSet lambda;
    Matrix coeffs;
    std::vector<Marginal> marginals;

    int dim() const { return lambda.dim(); }
    Eigen::Index value_size() const { return coeffs.rows(); }

    Vector mean() const;
    /// Sum of squared non-constant coefficients, componentwise.
    Vector variance() const;

    /// Row `component` as a scalar expansion on the same lambda.
    GpcExpansion component(Eigen::Index component) const;
};

/// Converts a sparse-grid interpolant into the equivalent expansion on
/// induced_lambda(sg.index_set): each tensor interpolant is re-expressed in
/// the orthonormal basis by a generalized Vandermonde solve and the results
/// are accumulated with the combination coefficients.
GpcExpansion lagrange_to_gpc(const SparseGridApprox& sg, const Matrix& values);
GpcExpansion lagrange_to_gpc(const SparseGridApprox& sg, std::span<const double> values);

/// Throws DomainError when y leaves the support.
Vector eval_gpc(const GpcExpansion& expansion, std::span<const double> y);
double eval_gpc_scalar(const GpcExpansion& expansion, std::span<const double> y);

/// Columns of inputs are points in the support; returns value_size x n.
Matrix eval_gpc_batch(const GpcExpansion& expansion, const Matrix& inputs);

/// n independent draws from the product of marginals, one per column.
Matrix draw_inputs(std::span<const Marginal> marginals, std::size_t n, std::uint64_t seed);

/// eval_gpc at n seeded draws of the inputs; value_size x n.
Matrix sample(const GpcExpansion& expansion, std::size_t n, std::uint64_t seed);
std::vector<double> sample_scalar(const GpcExpansion& expansion, std::size_t n, std::uint64_t seed);

nlohmann::json marginal_to_json(const Marginal& m);
Marginal marginal_from_json(const nlohmann::json& j);

/// {N, marginals, lambda: [[a1, a2], ...], coeffs: [...]}; scalar expansions
/// store coeffs as numbers, vector-valued ones as one array per multi-index.
nlohmann::json to_json(const GpcExpansion& expansion);
GpcExpansion gpc_from_json(const nlohmann::json& j);

}  // namespace bifuq
