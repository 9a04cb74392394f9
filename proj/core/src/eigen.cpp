// SPDX-License-Identifier: Apache-2.0
#include "bifuq/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bifuq/errors.hpp"

namespace bifuq {

namespace {

void fix_sign(Eigen::Ref<Vector> v) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        if (std::abs(v[j]) > best) {
            best = std::abs(v[j]);
            arg = j;
        }
    }
    if (v[arg] < 0.0) v = -v;
}

}  // namespace

SymEigen eig_sym_tridiag(const SymTridiag& t, int max_iterations_per_value) {
    const Eigen::Index n = t.size();
    if (n < 1) throw ContractViolation("eigen", "empty operator");
    if (t.off.size() != n - 1) throw ContractViolation("eigen", "off-diagonal length must be m-1");

    Vector d = t.diag;
    Vector e = Vector::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) e[i] = t.off[i];
    Matrix v = Matrix::Identity(n, n);

    const double eps = std::numeric_limits<double>::epsilon();
    double f = 0.0;
    double tst1 = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        Eigen::Index m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > max_iterations_per_value)
                    throw NumericalFailure("eigen", "QL iteration did not converge at eigenvalue " + std::to_string(l),
                                           static_cast<std::ptrdiff_t>(l));
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (Eigen::Index i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (Eigen::Index i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for (Eigen::Index k = 0; k < n; ++k) {
                        h = v(k, i + 1);
                        v(k, i + 1) = s * v(k, i) + c * h;
                        v(k, i) = c * v(k, i) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return d[x] > d[y]; });

    SymEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index src = order[static_cast<std::size_t>(j)];
        out.values[j] = d[src];
        out.vectors.col(j) = v.col(src) / v.col(src).norm();
        fix_sign(out.vectors.col(j));
    }
    return out;
}

std::vector<BifurcationPoint> bifurcation_points(const SpatialGrid& grid, const RandomFieldModel& field,
                                                 std::span<const double> y, int k) {
    if (k < 1 || k > grid.m())
        throw ContractViolation("eigen", "requested " + std::to_string(k) + " bifurcation points on a grid with m=" +
                                             std::to_string(grid.m()));
    field.check_realization(y);

    SymTridiag op = assemble_laplacian(grid);
    double shift = 0.0;
    if (field.kind == FieldKind::Homogeneous)
        shift = y[0];
    else
        op.diag += eval_field(grid, field, y);

    const SymEigen spectrum = eig_sym_tridiag(op);
    std::vector<BifurcationPoint> points;
    points.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        BifurcationPoint bp;
        bp.index = i + 1;
        bp.p_star = -spectrum.values[i] - shift;
        bp.direction = spectrum.vectors.col(i);
        bp.y.assign(y.begin(), y.end());
        points.push_back(std::move(bp));
    }
    return points;
}

BifurcationPoint mirrored(const BifurcationPoint& bif) {
    BifurcationPoint out = bif;
    out.direction = -bif.direction;
    return out;
}

}  // namespace bifuq
