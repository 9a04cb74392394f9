// SPDX-License-Identifier: Apache-2.0
#include "bifuq/sparse_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "bifuq/errors.hpp"

namespace bifuq {

namespace {

constexpr int kLejaCandidates = 50000;  // per side, so 10^5 + 1 candidates on [-1, 1]

/// Calls fn(index) for every index of the box {1..extent_n} in lexicographic order
/// (0-based positions, last dimension fastest).
template <class Fn>
void for_each_in_box(const std::vector<int>& extent, Fn&& fn) {
    const std::size_t dim = extent.size();
    std::vector<int> pos(dim, 0);
    for (int e : extent)
        if (e <= 0) return;
    while (true) {
        fn(pos);
        std::size_t n = dim;
        while (n > 0) {
            --n;
            if (++pos[n] < extent[n]) break;
            pos[n] = 0;
            if (n == 0) return;
        }
        if (dim == 0) return;
    }
}

}  // namespace

MultiIndexSet::MultiIndexSet(int dim, std::vector<MultiIndex> indices, IndexKind kind)
    : dim_(dim), kind_(kind), indices_(std::move(indices)) {
    if (dim < 1) throw ContractViolation("sparsegrid", "multi-index dimension must be positive");
    const int floor = kind == IndexKind::Levels ? 1 : 0;
    for (const auto& idx : indices_) {
        if (static_cast<int>(idx.size()) != dim) throw ContractViolation("sparsegrid", "multi-index of wrong length");
        for (int v : idx)
            if (v < floor) throw ContractViolation("sparsegrid", "multi-index component below its minimum");
    }
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

std::optional<std::size_t> MultiIndexSet::find(const MultiIndex& index) const {
    auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
    if (it == indices_.end() || *it != index) return std::nullopt;
    return static_cast<std::size_t>(it - indices_.begin());
}

bool MultiIndexSet::is_downward_closed() const {
    const int floor = kind_ == IndexKind::Levels ? 1 : 0;
    for (const auto& idx : indices_) {
        for (int n = 0; n < dim_; ++n) {
            if (idx[static_cast<std::size_t>(n)] > floor) {
                MultiIndex lower = idx;
                --lower[static_cast<std::size_t>(n)];
                if (!contains(lower)) return false;
            }
        }
    }
    return true;
}

int MultiIndexSet::max_total_degree() const {
    int best = 0;
    for (const auto& idx : indices_) best = std::max(best, std::accumulate(idx.begin(), idx.end(), 0));
    return best;
}

std::vector<double> symmetric_leja(int count) {
    if (count < 1) throw ContractViolation("sparsegrid", "symmetric_leja needs count >= 1");

    static std::mutex mutex;
    static std::vector<double> sequence;
    static std::vector<double> log_objective;  // sum_j log|t_k - y_j| over positive candidates

    std::lock_guard<std::mutex> lock(mutex);
    auto add_point = [&](double y) {
        sequence.push_back(y);
        for (int k = 1; k <= kLejaCandidates; ++k) {
            const double t = static_cast<double>(k) / kLejaCandidates;
            log_objective[static_cast<std::size_t>(k - 1)] += std::log(std::abs(t - y));
        }
    };
    if (sequence.empty()) {
        log_objective.assign(kLejaCandidates, 0.0);
        add_point(0.0);
        add_point(1.0);
        add_point(-1.0);
    }
    while (static_cast<int>(sequence.size()) < count) {
        int best = -1;
        double best_value = -std::numeric_limits<double>::infinity();
        for (int k = 1; k <= kLejaCandidates; ++k) {
            const double v = log_objective[static_cast<std::size_t>(k - 1)];
            if (v > best_value) {
                best_value = v;
                best = k;
            }
        }
        const double y = static_cast<double>(best) / kLejaCandidates;
        add_point(y);
        add_point(-y);
    }
    return {sequence.begin(), sequence.begin() + count};
}

int level_to_knots(int level) {
    if (level < 1) throw ContractViolation("sparsegrid", "levels start at 1");
    return 2 * level - 1;
}

MultiIndexSet total_degree_levels(int dim, int w) {
    if (dim < 1 || w < 0) throw ContractViolation("sparsegrid", "total_degree_levels needs N >= 1, w >= 0");
    std::vector<MultiIndex> out;
    for_each_in_box(std::vector<int>(static_cast<std::size_t>(dim), w + 1), [&](const std::vector<int>& pos) {
        if (std::accumulate(pos.begin(), pos.end(), 0) <= w) {
            MultiIndex idx(pos.begin(), pos.end());
            for (int& v : idx) ++v;
            out.push_back(std::move(idx));
        }
    });
    return MultiIndexSet(dim, std::move(out), IndexKind::Levels);
}

std::vector<int> combination_coefficients(const MultiIndexSet& levels) {
    if (levels.kind() != IndexKind::Levels) throw ContractViolation("sparsegrid", "expected a level set");
    if (!levels.is_downward_closed()) throw ContractViolation("sparsegrid", "level set is not downward closed");
    const int dim = levels.dim();
    std::vector<int> coeffs(levels.size(), 0);
    for (std::size_t k = 0; k < levels.size(); ++k) {
        int c = 0;
        for (unsigned mask = 0; mask < (1u << dim); ++mask) {
            MultiIndex shifted = levels[k];
            int ones = 0;
            for (int n = 0; n < dim; ++n) {
                if (mask & (1u << n)) {
                    ++shifted[static_cast<std::size_t>(n)];
                    ++ones;
                }
            }
            if (levels.contains(shifted)) c += (ones % 2 == 0) ? 1 : -1;
        }
        coeffs[k] = c;
    }
    return coeffs;
}

SparseGridApprox build_sparse_grid(const MultiIndexSet& levels, std::span<const Marginal> marginals,
                                   const LevelToKnots& knots) {
    const int dim = levels.dim();
    if (static_cast<int>(marginals.size()) != dim)
        throw ContractViolation("sparsegrid", "need one marginal per stochastic dimension");
    for (const auto& mg : marginals)
        if (mg.kind != MarginalKind::Uniform)
            throw UnsupportedOperation("sparsegrid", "collocation supports uniform marginals only, got " + mg.describe());
    if (levels.empty()) throw ContractViolation("sparsegrid", "empty level set");

    SparseGridApprox sg{levels, combination_coefficients(levels), {}, {marginals.begin(), marginals.end()}, {}, {}, {}, {}};

    int max_knots = 1;
    for (const auto& idx : levels)
        for (int v : idx) max_knots = std::max(max_knots, knots(v));
    sg.leja = symmetric_leja(max_knots);

    std::map<std::vector<int>, std::size_t> ids;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (sg.coefficients[k] == 0) continue;
        TensorGrid tg;
        tg.level = levels[k];
        tg.coefficient = sg.coefficients[k];
        for (int v : tg.level) tg.knots.push_back(knots(v));
        for_each_in_box(tg.knots, [&](const std::vector<int>& pos) {
            auto [it, inserted] = ids.try_emplace(pos, sg.points.size());
            if (inserted) {
                std::vector<double> t(static_cast<std::size_t>(dim));
                std::vector<double> y(static_cast<std::size_t>(dim));
                for (int n = 0; n < dim; ++n) {
                    const auto un = static_cast<std::size_t>(n);
                    t[un] = sg.leja[static_cast<std::size_t>(pos[un])];
                    y[un] = marginals[un].from_canonical(t[un]);
                }
                sg.leja_ids.push_back(pos);
                sg.canonical.push_back(std::move(t));
                sg.points.push_back(std::move(y));
            }
            tg.point_map.push_back(it->second);
        });
        sg.tensor_grids.push_back(std::move(tg));
    }
    return sg;
}

std::vector<double> lagrange_weights(std::span<const double> nodes, double t) {
    std::vector<double> w(nodes.size(), 1.0);
    for (std::size_t j = 0; j < nodes.size(); ++j)
        for (std::size_t k = 0; k < nodes.size(); ++k)
            if (k != j) w[j] *= (t - nodes[k]) / (nodes[j] - nodes[k]);
    return w;
}

Vector interpolate(const SparseGridApprox& sg, const Matrix& values, std::span<const double> y) {
    const int dim = sg.dim();
    if (static_cast<std::size_t>(values.cols()) != sg.size())
        throw ContractViolation("sparsegrid", "values must have one column per collocation point");
    if (static_cast<int>(y.size()) != dim) throw ContractViolation("sparsegrid", "evaluation point of wrong dimension");
    std::vector<double> t(static_cast<std::size_t>(dim));
    for (int n = 0; n < dim; ++n) {
        const auto& mg = sg.marginals[static_cast<std::size_t>(n)];
        if (!mg.contains(y[static_cast<std::size_t>(n)]))
            throw DomainError("sparsegrid", "evaluation point outside " + mg.describe());
        t[static_cast<std::size_t>(n)] = mg.to_canonical(y[static_cast<std::size_t>(n)]);
    }

    Vector out = Vector::Zero(values.rows());
    std::vector<std::vector<double>> weights(static_cast<std::size_t>(dim));
    for (const auto& tg : sg.tensor_grids) {
        for (int n = 0; n < dim; ++n) {
            const auto un = static_cast<std::size_t>(n);
            weights[un] = lagrange_weights(std::span<const double>(sg.leja.data(), static_cast<std::size_t>(tg.knots[un])), t[un]);
        }
        std::size_t flat = 0;
        for_each_in_box(tg.knots, [&](const std::vector<int>& pos) {
            double w = tg.coefficient;
            for (int n = 0; n < dim; ++n) w *= weights[static_cast<std::size_t>(n)][static_cast<std::size_t>(pos[static_cast<std::size_t>(n)])];
            out += w * values.col(static_cast<Eigen::Index>(tg.point_map[flat]));
            ++flat;
        });
    }
    return out;
}

double interpolate(const SparseGridApprox& sg, std::span<const double> values, std::span<const double> y) {
    const Eigen::Map<const Eigen::RowVectorXd> row(values.data(), static_cast<Eigen::Index>(values.size()));
    return interpolate(sg, Matrix(row), y)[0];
}

}  // namespace bifuq
