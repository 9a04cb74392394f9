// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bifuq/marginal.hpp"
#include "bifuq/spatial.hpp"

namespace bifuq {

using MultiIndex = std::vector<int>;

/// Levels are 1-based (collocation levels i); degrees are 0-based (alpha).
enum class IndexKind { Levels, Degrees };

/// Finite set of N-dimensional multi-indices kept without duplicates in
/// lexicographic order.
class MultiIndexSet {
public:
    MultiIndexSet(int dim, std::vector<MultiIndex> indices, IndexKind kind);

    int dim() const { return dim_; }
    IndexKind kind() const { return kind_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    const MultiIndex& operator[](std::size_t k) const { return indices_[k]; }
    const std::vector<MultiIndex>& indices() const { return indices_; }
    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }

    std::optional<std::size_t> find(const MultiIndex& index) const;
    bool contains(const MultiIndex& index) const { return find(index).has_value(); }

    /// Every index lowered by one in any component (down to 1 for levels,
    /// 0 for degrees) is also in the set.
    bool is_downward_closed() const;

    int max_total_degree() const;

private:
    int dim_;
    IndexKind kind_;
    std::vector<MultiIndex> indices_;
};

/// First K points of the symmetric Leja sequence on [-1,1]: 0, 1, -1, then
/// mirror pairs whose positive member maximizes prod |y - y_j| over the
/// candidates k / 50000, k = 1..50000 (ties to smaller |y|).
std::vector<double> symmetric_leja(int count);

/// m(i) = 2i - 1.
int level_to_knots(int level);

using LevelToKnots = std::function<int(int)>;

/// {i in N_+^N : sum (i_n - 1) <= w}.
MultiIndexSet total_degree_levels(int dim, int w);

/// c_i = sum over j in {0,1}^N with i + j in I of (-1)^|j|.
/// Throws ContractViolation if I is not a downward-closed level set.
std::vector<int> combination_coefficients(const MultiIndexSet& levels);

/// One tensor interpolant of the combination: knots per dimension and the
/// ids of its points in the global list, enumerated lexicographically
/// (last dimension fastest).
struct TensorGrid {
    MultiIndex level;
    int coefficient = 0;
    std::vector<int> knots;
    std::vector<std::size_t> point_map;
};

struct SparseGridApprox {
    MultiIndexSet index_set;
    std::vector<int> coefficients;       // aligned with index_set
    std::vector<TensorGrid> tensor_grids; // only the indices with c_i != 0
    std::vector<Marginal> marginals;
    std::vector<std::vector<int>> leja_ids;    // per global point, position in the Leja sequence per dim
    std::vector<std::vector<double>> canonical; // per global point, coordinates in [-1,1]^N
    std::vector<std::vector<double>> points;    // per global point, coordinates in the support

    int dim() const { return index_set.dim(); }
    std::size_t size() const { return points.size(); }

    /// Canonical univariate knots (shared prefix of the Leja sequence).
    std::vector<double> leja;
};

/// Sparse grid for a downward-closed level set with symmetric Leja knots and
/// the given level-to-knots map. Points are deduplicated by their Leja
/// position tuple, which is exact for nested families.
SparseGridApprox build_sparse_grid(const MultiIndexSet& levels, std::span<const Marginal> marginals,
                                   const LevelToKnots& knots = level_to_knots);

inline SparseGridApprox build_sparse_grid(int dim, int w, std::span<const Marginal> marginals) {
    return build_sparse_grid(total_degree_levels(dim, w), marginals);
}

/// Combination of tensor Lagrange interpolants evaluated at y. values holds
/// one column per global point (rows are the components of the value).
Vector interpolate(const SparseGridApprox& sg, const Matrix& values, std::span<const double> y);
double interpolate(const SparseGridApprox& sg, std::span<const double> values, std::span<const double> y);

/// Lagrange basis of the given nodes evaluated at t.
std::vector<double> lagrange_weights(std::span<const double> nodes, double t);

}  // namespace bifuq
