// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "bifuq/eigen.hpp"
#include "bifuq/errors.hpp"
#include "bifuq/spatial.hpp"

namespace bifuq {

/// Pseudo-arclength parameters. The samples of every traced branch sit at
/// s_l = l * ds, l = 0..n_steps, so branches traced with the same settings
/// share one parametrization.
struct ContinuationSettings {
    double xi = 0.5;              // weight of the state part in the arclength metric
    double ds = 0.05;             // arclength step
    int n_steps = 100;            // S = n_steps * ds
    double newton_tol = 1e-10;    // on ||F|| and |mu|
    int newton_max_iter = 10;
    int max_step_halvings = 0;    // sub-stepping retries inside one step

    double arclength_end() const { return n_steps * ds; }

    /// Throws ContractViolation unless 0 < xi < 1, ds > 0, tol > 0, and counts valid.
    void validate() const;

    /// Settings with endpoint S; S must be an integer multiple of ds.
    static ContinuationSettings with_endpoint(double S, double ds, double xi = 0.5, double newton_tol = 1e-10);
};

/// An element of R x R^m: a point (p, u) on a curve, or a tangent (p', u').
struct CurvePoint {
    double p = 0.0;
    Vector u;
};

/// <(a,b),(c,d)>_xi = (1 - xi) a c + xi <b, d>.
double xi_dot(const CurvePoint& lhs, const CurvePoint& rhs, double xi);
double xi_norm(const CurvePoint& v, double xi);

/// An equilibrium branch sampled at fixed arclength steps.
struct Branch {
    int index = 1;
    std::vector<double> y;
    std::vector<double> s_values;
    std::vector<double> p_values;
    std::vector<Vector> states;
    std::vector<CurvePoint> tangents;  // unit in the xi-norm

    std::size_t size() const { return s_values.size(); }
};

/// Thrown when a step cannot be completed; carries everything accepted so far.
class ContinuationFailure : public NumericalFailure {
public:
    ContinuationFailure(const std::string& what, Branch partial, int failed_step)
        : NumericalFailure("continuation", what, failed_step), partial_(std::move(partial)), failed_step_(failed_step) {}

    const Branch& partial() const noexcept { return partial_; }
    int failed_step() const noexcept { return failed_step_; }

private:
    Branch partial_;
    int failed_step_;
};

/// Unit tangent at a point of the solution curve.
///
/// Solves the bordered system [D_u F, D_p F; prev^T_xi] t = e_{m+1}, normalizes
/// to ||t||_xi = 1 and orients it so <t, prev>_xi > 0. When the bordered matrix
/// is singular but the system is consistent (at a branch point, where the
/// previous tangent selects one of the crossing curves) the minimum-norm
/// solution is used; an inconsistent singular system throws NumericalFailure.
CurvePoint tangent(const DiscreteSystem& system, const CurvePoint& point, const CurvePoint& prev_tangent, double xi);

struct NewtonReport {
    CurvePoint point;
    int iterations = 0;                 // residual evaluations, >= 1
    std::vector<double> residual_norms; // ||(F, mu)|| at each evaluation
};

/// Newton corrector for H(p, u) = (F(p, u), mu(p, u)) = 0 with
///   mu = (1 - xi) p0' (p - p0) + xi <u0', u - u0> - s_offset.
/// Throws NumericalFailure when newton_max_iter evaluations are not enough.
NewtonReport newton_correct(const DiscreteSystem& system, const CurvePoint& guess, const CurvePoint& anchor,
                            const CurvePoint& anchor_tangent, double s_offset, const ContinuationSettings& settings);

/// Traces the branch emanating from bif along +bif.direction (use mirrored()
/// for the other half of the pitchfork). The bifurcation point itself is
/// never corrected: the first predictor is (p*, ds * v / ||(0, v)||_xi).
/// Throws ContinuationFailure with the partial branch on an unrecoverable step.
Branch trace_branch(const DiscreteSystem& system, const BifurcationPoint& bif, const ContinuationSettings& settings);

/// Newton solve of F(p, u) = 0 for u at fixed p.
Vector solve_at_parameter(const DiscreteSystem& system, double p, Vector guess, double tol = 1e-12,
                          int max_iter = 50);

/// Equilibrium on the branch at parameter value p: brackets p between two
/// consecutive samples, interpolates, then corrects at fixed p.
Vector state_at_parameter(const DiscreteSystem& system, const Branch& branch, double p, double tol = 1e-12);

/// Every factor-th sample of a branch traced with coarse_ds / factor, placed
/// on the coarse grid s_l = l * coarse_ds.
Branch subsample(const Branch& fine, int factor, double coarse_ds);

}  // namespace bifuq
