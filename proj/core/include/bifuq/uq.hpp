// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bifuq/continuation.hpp"
#include "bifuq/density.hpp"
#include "bifuq/eigen.hpp"
#include "bifuq/gpc.hpp"
#include "bifuq/sparse_grid.hpp"
#include "bifuq/spatial.hpp"

namespace bifuq {

// ---------------------------------------------------------------------------
// Homogeneous field: closed-form transport of the input law.
// ---------------------------------------------------------------------------

/// Law of p*_i(Y) = -lambda_i - Y for the homogeneous model, i.e. the input
/// density reflected and shifted: rho(t) = rho_Y(-lambda_i - t).
class BifPointLaw {
public:
    BifPointLaw(Marginal input, double lambda) : input_(input), lambda_(lambda) {}

    double lo() const { return -lambda_ - input_.hi; }
    double hi() const { return -lambda_ - input_.lo; }
    bool point_mass() const { return input_.degenerate(); }

    double pdf(double t) const { return input_.pdf(-lambda_ - t); }
    double cdf(double t) const;
    double mean() const { return -lambda_ - input_.expectation(); }
    double variance() const { return input_.variance(); }
    double eigenvalue() const { return lambda_; }

private:
    Marginal input_;
    double lambda_;
};

/// Throws UnsupportedOperation for a heterogeneous field.
BifPointLaw homogeneous_bifpoint_pdf(const RandomFieldModel& field, double lambda);

/// P(p*_1 <= p_bar): analytic cdf, or the empirical cdf of samples.
double probability_of_bifurcating(const BifPointLaw& law, double p_bar);
double probability_of_bifurcating(std::span<const double> samples, double p_bar);

/// Sample branches for a homogeneous field as shifts of one reference branch
/// traced at y = 0: p -> p - g(y), states unchanged. y_samples has one
/// column per realization.
std::vector<Branch> homogeneous_branch_ensemble(const Branch& reference, const RandomFieldModel& field,
                                                const Matrix& y_samples);

// ---------------------------------------------------------------------------
// Surrogates built by sparse-grid collocation.
// ---------------------------------------------------------------------------

/// Work counters for collocation runs (reported by the CLI).
struct CollocationLog {
    std::size_t eigen_solves = 0;
    std::size_t continuations = 0;
};

struct BifPointSurrogate {
    int index = 1;
    GpcExpansion expansion;
};

/// Surrogates of p*_i for every i in `indices`, all on the Lambda induced by
/// the level budget w (one eigen-solve per collocation point serves all i).
std::vector<BifPointSurrogate> fit_bifpoint_surrogates(const SpatialGrid& grid, const RandomFieldModel& field, int w,
                                                       const std::vector<int>& indices, int threads = 1,
                                                       CollocationLog* log = nullptr);

BifPointSurrogate fit_bifpoint_surrogate(const SpatialGrid& grid, const RandomFieldModel& field, int w, int index,
                                         int threads = 1, CollocationLog* log = nullptr);

/// Per-arclength-sample expansions of the branch components r(s, y), u(s, y),
/// all on one Lambda.
struct BranchSurrogate {
    int index = 1;
    std::vector<double> s_values;
    std::vector<GpcExpansion> r_expansions;
    std::vector<GpcExpansion> u_expansions;

    std::size_t size() const { return s_values.size(); }
    /// The mean bifurcation curve (zero-index coefficients).
    std::vector<double> mean_p() const;
    std::vector<Vector> mean_states() const;
};

/// Traces branch `index` at every collocation point of the sparse grid with
/// identical settings. A failed continuation at any point aborts the fit;
/// with resample_rounds > 0 every branch is first retraced with ds halved
/// (and subsampled back) before giving up.
std::vector<Branch> collocate_branches(const SpatialGrid& grid, const RandomFieldModel& field,
                                       const SparseGridApprox& sg, int index, const ContinuationSettings& settings,
                                       int threads = 1, CollocationLog* log = nullptr, int resample_rounds = 0);

BranchSurrogate branch_surrogate_from(const SparseGridApprox& sg, const std::vector<Branch>& branches);

BranchSurrogate fit_branch_surrogate(const SpatialGrid& grid, const RandomFieldModel& field, int w, int index,
                                     const ContinuationSettings& settings, int threads = 1,
                                     CollocationLog* log = nullptr);

// ---------------------------------------------------------------------------
// Observables, convergence.
// ---------------------------------------------------------------------------

enum class ObservableKind { L2Norm, PointValue };

struct ObservableChoice {
    ObservableKind kind = ObservableKind::L2Norm;
    double x0 = 0.0;  // for PointValue
};

struct ObservableCurve {
    std::vector<double> values;
    int node = -1;              // node used for PointValue
    bool nearest_node = false;  // x0 was not a grid node
};

/// sqrt(h sum u_j^2), or u at the node for x0.
double observable(const SpatialGrid& grid, const Vector& u, const ObservableChoice& choice);

ObservableCurve branch_observable(const SpatialGrid& grid, std::span<const Vector> states, const ObservableChoice& choice);
ObservableCurve branch_observable(const SpatialGrid& grid, const Branch& branch, const ObservableChoice& choice);
/// Observable of the mean curve of a surrogate.
ObservableCurve branch_observable(const SpatialGrid& grid, const BranchSurrogate& surrogate, const ObservableChoice& choice);

struct ConvergenceRow {
    int w = 0;
    std::size_t lambda_cardinality = 0;
    double rms_p_star = 0.0;
    double rms_r = 0.0;
    double rms_u = 0.0;  // RMS of the discrete L2(D) norm of the state error
};

struct ConvergenceOptions {
    std::vector<int> w_list;
    int w_ref = 12;
    double s_probe = 5.0;
    std::size_t n_mc = 10000;
    std::uint64_t seed = 20240601;
    bool include_branch = true;
    int threads = 1;
};

/// RMS errors of the level-w surrogates against the level-w_ref reference
/// at n_mc common random inputs, one row per entry of w_list (w = w_ref is
/// allowed and yields zero error). Nested grids let every level reuse the
/// reference collocation solves.
std::vector<ConvergenceRow> convergence_study(const SpatialGrid& grid, const RandomFieldModel& field, int index,
                                              const ConvergenceOptions& options, const ContinuationSettings& settings,
                                              CollocationLog* log = nullptr);

}  // namespace bifuq
