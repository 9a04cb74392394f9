// SPDX-License-Identifier: Apache-2.0
#include "bifuq/uq.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "bifuq/errors.hpp"
#include "bifuq/parallel.hpp"

namespace bifuq {

namespace {

std::string format_point(std::span<const double> y) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (std::size_t n = 0; n < y.size(); ++n) os << (n ? ", " : "") << y[n];
    os << ")";
    return os.str();
}

Matrix branch_values(const std::vector<Branch>& branches, std::size_t first_s, std::size_t count_s) {
    const auto m = branches.front().states.front().size();
    Matrix values(static_cast<Eigen::Index>(count_s) * (m + 1), static_cast<Eigen::Index>(branches.size()));
    for (std::size_t k = 0; k < branches.size(); ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        for (std::size_t l = 0; l < count_s; ++l) {
            const auto row = static_cast<Eigen::Index>(l) * (m + 1);
            values(row, col) = branches[k].p_values[first_s + l];
            values.block(row + 1, col, m, 1) = branches[k].states[first_s + l];
        }
    }
    return values;
}

void check_shared_parametrization(const std::vector<Branch>& branches) {
    if (branches.empty()) throw ContractViolation("uq", "no branches to combine");
    for (const auto& b : branches)
        if (b.s_values != branches.front().s_values)
            throw ContractViolation("uq", "branches do not share one arclength parametrization");
}

}  // namespace

double BifPointLaw::cdf(double t) const {
    // P(-lambda - Y <= t) = P(Y >= -lambda - t)
    const double y = -lambda_ - t;
    if (point_mass()) return t >= -lambda_ - input_.lo ? 1.0 : 0.0;
    return 1.0 - input_.cdf(y);
}

BifPointLaw homogeneous_bifpoint_pdf(const RandomFieldModel& field, double lambda) {
    if (field.kind != FieldKind::Homogeneous || field.marginals.size() != 1)
        throw UnsupportedOperation("uq", "analytic bifurcation-point law exists only for the homogeneous field");
    return BifPointLaw(field.marginals.front(), lambda);
}

double probability_of_bifurcating(const BifPointLaw& law, double p_bar) { return law.cdf(p_bar); }

double probability_of_bifurcating(std::span<const double> samples, double p_bar) {
    return empirical_cdf(samples, p_bar);
}

std::vector<Branch> homogeneous_branch_ensemble(const Branch& reference, const RandomFieldModel& field,
                                                const Matrix& y_samples) {
    if (field.kind != FieldKind::Homogeneous)
        throw UnsupportedOperation("uq", "branch shifting applies only to the homogeneous field");
    if (y_samples.rows() != 1) throw ContractViolation("uq", "homogeneous inputs are one-dimensional");
    std::vector<Branch> out;
    out.reserve(static_cast<std::size_t>(y_samples.cols()));
    for (Eigen::Index k = 0; k < y_samples.cols(); ++k) {
        const std::vector<double> y{y_samples(0, k)};
        field.check_realization(y);
        Branch b = reference;
        b.y = y;
        for (double& p : b.p_values) p -= y[0];
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<BifPointSurrogate> fit_bifpoint_surrogates(const SpatialGrid& grid, const RandomFieldModel& field, int w,
                                                       const std::vector<int>& indices, int threads,
                                                       CollocationLog* log) {
    if (indices.empty()) throw ContractViolation("uq", "no bifurcation indices requested");
    const int kmax = *std::max_element(indices.begin(), indices.end());
    if (*std::min_element(indices.begin(), indices.end()) < 1) throw ContractViolation("uq", "indices start at 1");

    const SparseGridApprox sg = build_sparse_grid(field.dim(), w, field.marginals);
    Matrix values(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(sg.size()));
    parallel_for(sg.size(), threads, [&](std::size_t k) {
        try {
            const auto bps = bifurcation_points(grid, field, sg.points[k], kmax);
            for (std::size_t r = 0; r < indices.size(); ++r)
                values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
                    bps[static_cast<std::size_t>(indices[r] - 1)].p_star;
        } catch (const NumericalFailure& e) {
            throw NumericalFailure("eigen", std::string(e.what()) + " at collocation point " + std::to_string(k) + " " +
                                                format_point(sg.points[k]),
                                   static_cast<std::ptrdiff_t>(k));
        }
    });
    if (log) log->eigen_solves += sg.size();

    const GpcExpansion all = lagrange_to_gpc(sg, values);
    std::vector<BifPointSurrogate> out;
    for (std::size_t r = 0; r < indices.size(); ++r)
        out.push_back(BifPointSurrogate{indices[r], all.component(static_cast<Eigen::Index>(r))});
    return out;
}

BifPointSurrogate fit_bifpoint_surrogate(const SpatialGrid& grid, const RandomFieldModel& field, int w, int index,
                                         int threads, CollocationLog* log) {
    return fit_bifpoint_surrogates(grid, field, w, {index}, threads, log).front();
}

std::vector<double> BranchSurrogate::mean_p() const {
    std::vector<double> out;
    for (const auto& e : r_expansions) out.push_back(e.mean()[0]);
    return out;
}

std::vector<Vector> BranchSurrogate::mean_states() const {
    std::vector<Vector> out;
    for (const auto& e : u_expansions) out.push_back(e.mean());
    return out;
}

std::vector<Branch> collocate_branches(const SpatialGrid& grid, const RandomFieldModel& field,
                                       const SparseGridApprox& sg, int index, const ContinuationSettings& settings,
                                       int threads, CollocationLog* log, int resample_rounds) {
    settings.validate();
    if (index < 1 || index > grid.m()) throw ContractViolation("uq", "branch index out of range");
    for (int round = 0;; ++round) {
        const int factor = 1 << round;
        ContinuationSettings fine = settings;
        fine.ds = settings.ds / factor;
        fine.n_steps = settings.n_steps * factor;

        std::vector<Branch> branches(sg.size());
        try {
            parallel_for(sg.size(), threads, [&](std::size_t k) {
                try {
                    const DiscreteSystem system(grid, field, sg.points[k]);
                    const auto bif = bifurcation_points(grid, field, sg.points[k], index).back();
                    Branch b = trace_branch(system, bif, fine);
                    branches[k] = factor == 1 ? std::move(b) : subsample(b, factor, settings.ds);
                } catch (const ContinuationFailure& e) {
                    throw ContinuationFailure(std::string(e.what()) + " at collocation point " + std::to_string(k) +
                                                  " " + format_point(sg.points[k]),
                                              e.partial(), e.failed_step());
                }
            });
        } catch (const ContinuationFailure&) {
            if (log) log->continuations += sg.size();
            if (round >= resample_rounds) throw;
            continue;
        }
        if (log) log->continuations += sg.size();
        return branches;
    }
}

BranchSurrogate branch_surrogate_from(const SparseGridApprox& sg, const std::vector<Branch>& branches) {
    if (branches.size() != sg.size()) throw ContractViolation("uq", "need one branch per collocation point");
    check_shared_parametrization(branches);
    const std::size_t n_s = branches.front().size();
    const auto m = branches.front().states.front().size();

    const GpcExpansion all = lagrange_to_gpc(sg, branch_values(branches, 0, n_s));
    BranchSurrogate out;
    out.index = branches.front().index;
    out.s_values = branches.front().s_values;
    for (std::size_t l = 0; l < n_s; ++l) {
        const auto row = static_cast<Eigen::Index>(l) * (m + 1);
        out.r_expansions.push_back(GpcExpansion{all.lambda, all.coeffs.middleRows(row, 1), all.marginals});
        out.u_expansions.push_back(GpcExpansion{all.lambda, all.coeffs.middleRows(row + 1, m), all.marginals});
    }
    return out;
}

BranchSurrogate fit_branch_surrogate(const SpatialGrid& grid, const RandomFieldModel& field, int w, int index,
                                     const ContinuationSettings& settings, int threads, CollocationLog* log) {
    const SparseGridApprox sg = build_sparse_grid(field.dim(), w, field.marginals);
    return branch_surrogate_from(sg, collocate_branches(grid, field, sg, index, settings, threads, log));
}

double observable(const SpatialGrid& grid, const Vector& u, const ObservableChoice& choice) {
    if (u.size() != grid.m()) throw ContractViolation("uq", "state length does not match grid");
    if (choice.kind == ObservableKind::L2Norm) return std::sqrt(grid.h() * u.squaredNorm());
    return u[grid.nearest_node(choice.x0)];
}

ObservableCurve branch_observable(const SpatialGrid& grid, std::span<const Vector> states, const ObservableChoice& choice) {
    ObservableCurve out;
    if (choice.kind == ObservableKind::PointValue) {
        out.node = grid.nearest_node(choice.x0);
        const double scale = std::max({1.0, std::abs(grid.a()), std::abs(grid.b())});
        out.nearest_node = std::abs(grid.node(out.node) - choice.x0) > 1e-12 * scale;
    }
    out.values.reserve(states.size());
    for (const auto& u : states) out.values.push_back(observable(grid, u, choice));
    return out;
}

ObservableCurve branch_observable(const SpatialGrid& grid, const Branch& branch, const ObservableChoice& choice) {
    return branch_observable(grid, std::span<const Vector>(branch.states), choice);
}

ObservableCurve branch_observable(const SpatialGrid& grid, const BranchSurrogate& surrogate, const ObservableChoice& choice) {
    const auto states = surrogate.mean_states();
    return branch_observable(grid, std::span<const Vector>(states), choice);
}

std::vector<ConvergenceRow> convergence_study(const SpatialGrid& grid, const RandomFieldModel& field, int index,
                                              const ConvergenceOptions& options, const ContinuationSettings& settings,
                                              CollocationLog* log) {
    if (options.w_list.empty()) throw ContractViolation("uq", "empty w_list");
    for (int w : options.w_list)
        if (w < 0 || w > options.w_ref) throw ContractViolation("uq", "every w must satisfy 0 <= w <= w_ref");
    if (options.n_mc < 1000) throw ContractViolation("uq", "convergence study needs n_mc >= 1000");

    const SparseGridApprox ref_grid = build_sparse_grid(field.dim(), options.w_ref, field.marginals);

    // Reference collocation data, shared by every level through nestedness.
    const std::vector<int> idx{index};
    Matrix p_values(1, static_cast<Eigen::Index>(ref_grid.size()));
    parallel_for(ref_grid.size(), options.threads, [&](std::size_t k) {
        p_values(0, static_cast<Eigen::Index>(k)) =
            bifurcation_points(grid, field, ref_grid.points[k], index).back().p_star;
    });
    if (log) log->eigen_solves += ref_grid.size();

    std::size_t probe = 0;
    Matrix probe_values;
    if (options.include_branch) {
        const double steps = options.s_probe / settings.ds;
        probe = static_cast<std::size_t>(std::llround(steps));
        if (std::abs(steps - static_cast<double>(probe)) > 1e-9 * std::max(1.0, steps) ||
            probe > static_cast<std::size_t>(settings.n_steps))
            throw ContractViolation("uq", "s_probe must be a sample of the arclength grid");
        const auto branches = collocate_branches(grid, field, ref_grid, index, settings, options.threads, log);
        probe_values = branch_values(branches, probe, 1);
    }

    const Matrix inputs = draw_inputs(field.marginals, options.n_mc, options.seed);
    const double n = static_cast<double>(options.n_mc);
    const GpcExpansion p_ref = lagrange_to_gpc(ref_grid, p_values);
    const Matrix p_ref_at = eval_gpc_batch(p_ref, inputs);
    Matrix probe_ref_at;
    if (options.include_branch) probe_ref_at = eval_gpc_batch(lagrange_to_gpc(ref_grid, probe_values), inputs);

    std::map<std::vector<int>, Eigen::Index> ref_ids;
    for (std::size_t k = 0; k < ref_grid.size(); ++k) ref_ids.emplace(ref_grid.leja_ids[k], static_cast<Eigen::Index>(k));

    std::vector<ConvergenceRow> rows;
    for (int w : options.w_list) {
        const SparseGridApprox sg = build_sparse_grid(field.dim(), w, field.marginals);
        std::vector<Eigen::Index> cols;
        for (const auto& id : sg.leja_ids) cols.push_back(ref_ids.at(id));

        ConvergenceRow row;
        row.w = w;
        Matrix p_sub(1, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) p_sub(0, static_cast<Eigen::Index>(k)) = p_values(0, cols[k]);
        const GpcExpansion p_w = lagrange_to_gpc(sg, p_sub);
        row.lambda_cardinality = p_w.lambda.size();
        row.rms_p_star = std::sqrt((eval_gpc_batch(p_w, inputs) - p_ref_at).squaredNorm() / n);

        if (options.include_branch) {
            Matrix sub(probe_values.rows(), static_cast<Eigen::Index>(cols.size()));
            for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = probe_values.col(cols[k]);
            const Matrix diff = eval_gpc_batch(lagrange_to_gpc(sg, sub), inputs) - probe_ref_at;
            row.rms_r = std::sqrt(diff.row(0).squaredNorm() / n);
            row.rms_u = std::sqrt(grid.h() * diff.bottomRows(diff.rows() - 1).squaredNorm() / n);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace bifuq
