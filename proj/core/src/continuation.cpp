// SPDX-License-Identifier: Apache-2.0
#include "bifuq/continuation.hpp"

#include <cmath>
#include <string>

namespace bifuq {

namespace {

constexpr double kSingularRcond = 1e-14;

/// (m+1) x (m+1) matrix [D_u F, D_p F; xi u', (1 - xi) p'] in (u, p) ordering.
Matrix bordered_matrix(const DiscreteSystem& system, const CurvePoint& point, const CurvePoint& row, double xi) {
    const Eigen::Index m = point.u.size();
    Matrix a(m + 1, m + 1);
    a.topLeftCorner(m, m) = jacobian(system, point.p, point.u).dense();
    a.topRightCorner(m, 1) = point.u;  // D_p F = u
    a.bottomLeftCorner(1, m) = xi * row.u.transpose();
    a(m, m) = (1.0 - xi) * row.p;
    return a;
}

CurvePoint split(const Vector& z) {
    const Eigen::Index m = z.size() - 1;
    return CurvePoint{z[m], z.head(m)};
}

double arclength_constraint(const CurvePoint& point, const CurvePoint& anchor, const CurvePoint& anchor_tangent,
                            double s_offset, double xi) {
    return (1.0 - xi) * anchor_tangent.p * (point.p - anchor.p) + xi * anchor_tangent.u.dot(point.u - anchor.u) -
           s_offset;
}

}  // namespace

void ContinuationSettings::validate() const {
    if (!(xi > 0.0 && xi < 1.0)) throw ContractViolation("continuation", "xi must lie in (0,1)");
    if (!(ds > 0.0)) throw ContractViolation("continuation", "ds must be positive");
    if (n_steps < 0) throw ContractViolation("continuation", "n_steps must be nonnegative");
    if (!(newton_tol > 0.0)) throw ContractViolation("continuation", "newton_tol must be positive");
    if (newton_max_iter < 1) throw ContractViolation("continuation", "newton_max_iter must be positive");
    if (max_step_halvings < 0) throw ContractViolation("continuation", "max_step_halvings must be nonnegative");
}

ContinuationSettings ContinuationSettings::with_endpoint(double S, double ds, double xi, double newton_tol) {
    if (!(ds > 0.0) || !(S >= 0.0)) throw ContractViolation("continuation", "need ds > 0 and S >= 0");
    const double steps = S / ds;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps))
        throw ContractViolation("continuation", "S must be an integer multiple of ds");
    ContinuationSettings s;
    s.xi = xi;
    s.ds = ds;
    s.n_steps = static_cast<int>(rounded);
    s.newton_tol = newton_tol;
    s.validate();
    return s;
}

double xi_dot(const CurvePoint& lhs, const CurvePoint& rhs, double xi) {
    return (1.0 - xi) * lhs.p * rhs.p + xi * lhs.u.dot(rhs.u);
}

double xi_norm(const CurvePoint& v, double xi) { return std::sqrt(xi_dot(v, v, xi)); }

CurvePoint tangent(const DiscreteSystem& system, const CurvePoint& point, const CurvePoint& prev_tangent, double xi) {
    const Eigen::Index m = point.u.size();
    if (m != system.m() || prev_tangent.u.size() != m)
        throw ContractViolation("continuation", "tangent: vector sizes do not match the system");
    if (xi_norm(prev_tangent, xi) == 0.0) throw ContractViolation("continuation", "tangent: previous tangent is zero");

    const Matrix a = bordered_matrix(system, point, prev_tangent, xi);
    Vector rhs = Vector::Zero(m + 1);
    rhs[m] = 1.0;

    Eigen::PartialPivLU<Matrix> lu(a);
    Vector z;
    if (lu.rcond() > kSingularRcond) {
        z = lu.solve(rhs);
    } else {
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
        cod.setThreshold(1e-10);
        z = cod.solve(rhs);
        const double defect = (a * z - rhs).norm();
        if (!z.allFinite() || defect > 1e-8 * (1.0 + a.norm() * z.norm()))
            throw NumericalFailure("continuation", "singular bordered system at p=" + std::to_string(point.p));
    }

    CurvePoint t = split(z);
    const double norm = xi_norm(t, xi);
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw NumericalFailure("continuation", "degenerate tangent at p=" + std::to_string(point.p));
    const double sign = xi_dot(t, prev_tangent, xi) < 0.0 ? -1.0 : 1.0;
    t.p *= sign / norm;
    t.u *= sign / norm;
    return t;
}

NewtonReport newton_correct(const DiscreteSystem& system, const CurvePoint& guess, const CurvePoint& anchor,
                            const CurvePoint& anchor_tangent, double s_offset, const ContinuationSettings& settings) {
    const Eigen::Index m = system.m();
    if (guess.u.size() != m || anchor.u.size() != m || anchor_tangent.u.size() != m)
        throw ContractViolation("continuation", "newton_correct: vector sizes do not match the system");

    NewtonReport report;
    report.point = guess;
    Vector h(m + 1);
    for (int it = 0; it < settings.newton_max_iter; ++it) {
        h.head(m) = residual(system, report.point.p, report.point.u);
        h[m] = arclength_constraint(report.point, anchor, anchor_tangent, s_offset, settings.xi);
        ++report.iterations;
        report.residual_norms.push_back(h.norm());
        if (!h.allFinite()) break;
        if (h.head(m).norm() <= settings.newton_tol && std::abs(h[m]) <= settings.newton_tol) return report;

        Eigen::PartialPivLU<Matrix> lu(bordered_matrix(system, report.point, anchor_tangent, settings.xi));
        if (!(lu.rcond() > kSingularRcond))
            throw NumericalFailure("continuation", "singular Newton matrix at p=" + std::to_string(report.point.p), it);
        const Vector delta = lu.solve(h);
        report.point.u -= delta.head(m);
        report.point.p -= delta[m];
    }
    throw NumericalFailure("continuation",
                           "Newton corrector did not converge in " + std::to_string(settings.newton_max_iter) +
                               " iterations (last residual " + std::to_string(report.residual_norms.back()) + ")",
                           settings.newton_max_iter);
}

Branch trace_branch(const DiscreteSystem& system, const BifurcationPoint& bif, const ContinuationSettings& settings) {
    settings.validate();
    const Eigen::Index m = system.m();
    if (bif.direction.size() != m) throw ContractViolation("continuation", "bifurcation direction size mismatch");

    Branch branch;
    branch.index = bif.index;
    branch.y = system.y();
    const auto reserve = static_cast<std::size_t>(settings.n_steps) + 1;
    branch.s_values.reserve(reserve);
    branch.p_values.reserve(reserve);
    branch.states.reserve(reserve);
    branch.tangents.reserve(reserve);

    CurvePoint start{bif.p_star, Vector::Zero(m)};
    CurvePoint start_tangent{0.0, bif.direction};
    start_tangent.u /= xi_norm(start_tangent, settings.xi);

    branch.s_values.push_back(0.0);
    branch.p_values.push_back(start.p);
    branch.states.push_back(start.u);
    branch.tangents.push_back(start_tangent);

    CurvePoint current = start;
    CurvePoint current_tangent = start_tangent;
    for (int l = 1; l <= settings.n_steps; ++l) {
        bool accepted = false;
        std::string reason;
        CurvePoint next;
        CurvePoint next_tangent;
        for (int halving = 0; halving <= settings.max_step_halvings && !accepted; ++halving) {
            const int substeps = 1 << halving;
            const double h = settings.ds / substeps;
            try {
                CurvePoint point = current;
                CurvePoint tan = current_tangent;
                for (int q = 0; q < substeps; ++q) {
                    CurvePoint predictor{point.p + h * tan.p, point.u + h * tan.u};
                    NewtonReport corrected = newton_correct(system, predictor, point, tan, h, settings);
                    CurvePoint new_tan = tangent(system, corrected.point, tan, settings.xi);
                    point = std::move(corrected.point);
                    tan = std::move(new_tan);
                }
                next = std::move(point);
                next_tangent = std::move(tan);
                accepted = true;
            } catch (const NumericalFailure& e) {
                reason = e.what();
            }
        }
        if (!accepted)
            throw ContinuationFailure("step " + std::to_string(l) + " failed: " + reason, std::move(branch), l);

        current = std::move(next);
        current_tangent = std::move(next_tangent);
        branch.s_values.push_back(l * settings.ds);
        branch.p_values.push_back(current.p);
        branch.states.push_back(current.u);
        branch.tangents.push_back(current_tangent);
    }
    return branch;
}

Vector solve_at_parameter(const DiscreteSystem& system, double p, Vector guess, double tol, int max_iter) {
    if (guess.size() != system.m()) throw ContractViolation("continuation", "guess size mismatch");
    for (int it = 0; it < max_iter; ++it) {
        const Vector f = residual(system, p, guess);
        if (f.norm() <= tol) return guess;
        Eigen::PartialPivLU<Matrix> lu(jacobian(system, p, guess).dense());
        if (!(lu.rcond() > kSingularRcond))
            throw NumericalFailure("continuation", "singular Jacobian in fixed-parameter solve", it);
        guess -= lu.solve(f);
    }
    const double final_norm = residual(system, p, guess).norm();
    if (final_norm <= tol) return guess;
    throw NumericalFailure("continuation", "fixed-parameter Newton did not converge", max_iter);
}

Vector state_at_parameter(const DiscreteSystem& system, const Branch& branch, double p, double tol) {
    for (std::size_t l = 1; l < branch.size(); ++l) {
        const double p0 = branch.p_values[l - 1];
        const double p1 = branch.p_values[l];
        if ((p0 - p) * (p1 - p) <= 0.0 && p0 != p1) {
            const double theta = (p - p0) / (p1 - p0);
            Vector guess = (1.0 - theta) * branch.states[l - 1] + theta * branch.states[l];
            return solve_at_parameter(system, p, std::move(guess), tol);
        }
    }
    throw DomainError("continuation", "parameter value " + std::to_string(p) + " not reached by the branch");
}

Branch subsample(const Branch& fine, int factor, double coarse_ds) {
    if (factor < 1 || fine.size() == 0 || (fine.size() - 1) % static_cast<std::size_t>(factor) != 0)
        throw ContractViolation("continuation", "subsample factor must divide the number of steps");
    Branch coarse;
    coarse.index = fine.index;
    coarse.y = fine.y;
    for (std::size_t l = 0; l < fine.size(); l += static_cast<std::size_t>(factor)) {
        coarse.s_values.push_back(static_cast<double>(coarse.s_values.size()) * coarse_ds);
        coarse.p_values.push_back(fine.p_values[l]);
        coarse.states.push_back(fine.states[l]);
        coarse.tangents.push_back(fine.tangents[l]);
    }
    return coarse;
}

}  // namespace bifuq
