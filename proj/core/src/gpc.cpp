// SPDX-License-Identifier: Apache-2.0
#include "bifuq/gpc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bifuq/errors.hpp"

namespace bifuq {

namespace {

std::vector<MultiIndex> box_indices(const std::vector<int>& extent) {
    std::vector<MultiIndex> out;
    MultiIndex pos(extent.size(), 0);
    while (true) {
        out.push_back(pos);
        std::size_t n = extent.size();
        bool done = true;
        while (n > 0) {
            --n;
            if (++pos[n] < extent[n]) {
                done = false;
                break;
            }
            pos[n] = 0;
        }
        if (done) return out;
    }
}

std::vector<double> canonical_point(const std::vector<Marginal>& marginals, std::span<const double> y) {
    if (y.size() != marginals.size()) throw ContractViolation("gpc", "evaluation point of wrong dimension");
    std::vector<double> t(y.size());
    for (std::size_t n = 0; n < y.size(); ++n) {
        if (!marginals[n].contains(y[n]))
            throw DomainError("gpc", "evaluation point component " + std::to_string(n + 1) + " outside " +
                                         marginals[n].describe());
        t[n] = marginals[n].to_canonical(y[n]);
    }
    return t;
}

std::vector<int> max_degree_per_dim(const MultiIndexSet& lambda) {
    std::vector<int> out(static_cast<std::size_t>(lambda.dim()), 0);
    for (const auto& a : lambda)
        for (std::size_t n = 0; n < a.size(); ++n) out[n] = std::max(out[n], a[n]);
    return out;
}

/// Basis values psi_alpha(t) for every alpha in lambda, in lambda order.
Vector basis_row(const MultiIndexSet& lambda, const std::vector<int>& max_deg, const std::vector<double>& t) {
    std::vector<std::vector<double>> psi(t.size());
    for (std::size_t n = 0; n < t.size(); ++n) psi[n] = legendre_orthonormal_all(max_deg[n], t[n]);
    Vector out(static_cast<Eigen::Index>(lambda.size()));
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        double v = 1.0;
        for (std::size_t n = 0; n < t.size(); ++n) v *= psi[n][static_cast<std::size_t>(lambda[k][n])];
        out[static_cast<Eigen::Index>(k)] = v;
    }
    return out;
}

}  // namespace

std::vector<double> legendre_orthonormal_all(int max_degree, double t) {
    if (max_degree < 0) throw ContractViolation("gpc", "negative polynomial degree");
    std::vector<double> p(static_cast<std::size_t>(max_degree) + 1);
    p[0] = 1.0;
    if (max_degree >= 1) p[1] = t;
    for (int n = 1; n < max_degree; ++n)
        p[static_cast<std::size_t>(n + 1)] =
            ((2.0 * n + 1.0) * t * p[static_cast<std::size_t>(n)] - n * p[static_cast<std::size_t>(n - 1)]) / (n + 1.0);
    for (int n = 0; n <= max_degree; ++n) p[static_cast<std::size_t>(n)] *= std::sqrt(2.0 * n + 1.0);
    return p;
}

double legendre_orthonormal(int degree, double t) { return legendre_orthonormal_all(degree, t).back(); }

MultiIndexSet induced_lambda(const MultiIndexSet& levels, const LevelToKnots& knots) {
    if (levels.kind() != IndexKind::Levels) throw ContractViolation("gpc", "induced_lambda expects a level set");
    if (!levels.is_downward_closed()) throw ContractViolation("gpc", "level set is not downward closed");
    std::vector<MultiIndex> all;
    for (const auto& i : levels) {
        std::vector<int> extent;
        for (int v : i) extent.push_back(knots(v));
        auto box = box_indices(extent);
        all.insert(all.end(), box.begin(), box.end());
    }
    return MultiIndexSet(levels.dim(), std::move(all), IndexKind::Degrees);
}

Vector GpcExpansion::mean() const {
    const auto zero = lambda.find(MultiIndex(static_cast<std::size_t>(dim()), 0));
    if (!zero) return Vector::Zero(coeffs.rows());
    return coeffs.col(static_cast<Eigen::Index>(*zero));
}

Vector GpcExpansion::variance() const {
    const auto zero = lambda.find(MultiIndex(static_cast<std::size_t>(dim()), 0));
    Vector var = Vector::Zero(coeffs.rows());
    for (Eigen::Index k = 0; k < coeffs.cols(); ++k) {
        if (zero && static_cast<std::size_t>(k) == *zero) continue;
        var += coeffs.col(k).cwiseAbs2();
    }
    return var;
}

GpcExpansion GpcExpansion::component(Eigen::Index c) const {
    return GpcExpansion{lambda, coeffs.row(c), marginals};
}

GpcExpansion lagrange_to_gpc(const SparseGridApprox& sg, const Matrix& values) {
    if (static_cast<std::size_t>(values.cols()) != sg.size())
        throw ContractViolation("gpc", "values must have one column per collocation point");
    const int dim = sg.dim();
    GpcExpansion out{induced_lambda(sg.index_set), Matrix::Zero(values.rows(), 0), sg.marginals};
    out.coeffs = Matrix::Zero(values.rows(), static_cast<Eigen::Index>(out.lambda.size()));

    for (const auto& tg : sg.tensor_grids) {
        const auto local = box_indices(tg.knots);  // both the tensor points and the local degrees
        const auto size = static_cast<Eigen::Index>(local.size());

        std::vector<std::vector<std::vector<double>>> psi(static_cast<std::size_t>(dim));
        for (int n = 0; n < dim; ++n) {
            const auto un = static_cast<std::size_t>(n);
            for (int j = 0; j < tg.knots[un]; ++j)
                psi[un].push_back(legendre_orthonormal_all(tg.knots[un] - 1, sg.leja[static_cast<std::size_t>(j)]));
        }
        Matrix vandermonde(size, size);
        for (Eigen::Index r = 0; r < size; ++r) {
            for (Eigen::Index c = 0; c < size; ++c) {
                double v = 1.0;
                for (std::size_t n = 0; n < static_cast<std::size_t>(dim); ++n)
                    v *= psi[n][static_cast<std::size_t>(local[static_cast<std::size_t>(r)][n])]
                            [static_cast<std::size_t>(local[static_cast<std::size_t>(c)][n])];
                vandermonde(r, c) = v;
            }
        }
        Eigen::PartialPivLU<Matrix> lu(vandermonde);
        if (!(lu.rcond() > 1e-13))
            throw NumericalFailure("gpc", "singular tensor Vandermonde system");

        Matrix rhs(size, values.rows());
        for (Eigen::Index r = 0; r < size; ++r)
            rhs.row(r) = values.col(static_cast<Eigen::Index>(tg.point_map[static_cast<std::size_t>(r)])).transpose();
        const Matrix local_coeffs = lu.solve(rhs);

        for (Eigen::Index c = 0; c < size; ++c) {
            const auto slot = out.lambda.find(local[static_cast<std::size_t>(c)]);
            out.coeffs.col(static_cast<Eigen::Index>(*slot)) += tg.coefficient * local_coeffs.row(c).transpose();
        }
    }
    return out;
}

GpcExpansion lagrange_to_gpc(const SparseGridApprox& sg, std::span<const double> values) {
    const Eigen::Map<const Eigen::RowVectorXd> row(values.data(), static_cast<Eigen::Index>(values.size()));
    return lagrange_to_gpc(sg, Matrix(row));
}

Vector eval_gpc(const GpcExpansion& expansion, std::span<const double> y) {
    const auto t = canonical_point(expansion.marginals, y);
    const Vector basis = basis_row(expansion.lambda, max_degree_per_dim(expansion.lambda), t);
    Vector out = Vector::Zero(expansion.coeffs.rows());
    for (Eigen::Index k = 0; k < basis.size(); ++k) out += basis[k] * expansion.coeffs.col(k);
    return out;
}

double eval_gpc_scalar(const GpcExpansion& expansion, std::span<const double> y) {
    if (expansion.value_size() != 1) throw ContractViolation("gpc", "expansion is not scalar-valued");
    return eval_gpc(expansion, y)[0];
}

Matrix eval_gpc_batch(const GpcExpansion& expansion, const Matrix& inputs) {
    if (inputs.rows() != expansion.dim()) throw ContractViolation("gpc", "inputs must have one row per dimension");
    const auto max_deg = max_degree_per_dim(expansion.lambda);
    Matrix basis(static_cast<Eigen::Index>(expansion.lambda.size()), inputs.cols());
    std::vector<double> y(static_cast<std::size_t>(expansion.dim()));
    for (Eigen::Index s = 0; s < inputs.cols(); ++s) {
        for (std::size_t n = 0; n < y.size(); ++n) y[n] = inputs(static_cast<Eigen::Index>(n), s);
        basis.col(s) = basis_row(expansion.lambda, max_deg, canonical_point(expansion.marginals, y));
    }
    return expansion.coeffs * basis;
}

Matrix draw_inputs(std::span<const Marginal> marginals, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix out(static_cast<Eigen::Index>(marginals.size()), static_cast<Eigen::Index>(n));
    for (Eigen::Index s = 0; s < out.cols(); ++s)
        for (Eigen::Index d = 0; d < out.rows(); ++d) out(d, s) = marginals[static_cast<std::size_t>(d)].draw(rng);
    return out;
}

Matrix sample(const GpcExpansion& expansion, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw ContractViolation("gpc", "sample count must be positive");
    return eval_gpc_batch(expansion, draw_inputs(expansion.marginals, n, seed));
}

std::vector<double> sample_scalar(const GpcExpansion& expansion, std::size_t n, std::uint64_t seed) {
    if (expansion.value_size() != 1) throw ContractViolation("gpc", "expansion is not scalar-valued");
    const Matrix s = sample(expansion, n, seed);
    return {s.data(), s.data() + s.size()};
}

nlohmann::json marginal_to_json(const Marginal& m) {
    if (m.kind == MarginalKind::Uniform) return {{"dist", "uniform"}, {"lo", m.lo}, {"hi", m.hi}};
    return {{"dist", "truncated_gaussian"}, {"mean", m.mean}, {"sd", m.sd}, {"lo", m.lo}, {"hi", m.hi}};
}

Marginal marginal_from_json(const nlohmann::json& j) {
    const std::string dist = j.at("dist").get<std::string>();
    if (dist == "uniform") return Marginal::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
    if (dist == "truncated_gaussian")
        return Marginal::truncated_gaussian(j.at("mean").get<double>(), j.at("sd").get<double>(),
                                            j.at("lo").get<double>(), j.at("hi").get<double>());
    throw ContractViolation("gpc", "unknown marginal distribution '" + dist + "'");
}

nlohmann::json to_json(const GpcExpansion& expansion) {
    nlohmann::json j;
    j["N"] = expansion.dim();
    j["marginals"] = nlohmann::json::array();
    for (const auto& m : expansion.marginals) j["marginals"].push_back(marginal_to_json(m));
    j["lambda"] = expansion.lambda.indices();
    nlohmann::json coeffs = nlohmann::json::array();
    for (Eigen::Index k = 0; k < expansion.coeffs.cols(); ++k) {
        if (expansion.value_size() == 1) {
            coeffs.push_back(expansion.coeffs(0, k));
        } else {
            const Vector c = expansion.coeffs.col(k);
            coeffs.push_back(std::vector<double>(c.data(), c.data() + c.size()));
        }
    }
    j["coeffs"] = std::move(coeffs);
    return j;
}

GpcExpansion gpc_from_json(const nlohmann::json& j) {
    const int dim = j.at("N").get<int>();
    std::vector<Marginal> marginals;
    for (const auto& m : j.at("marginals")) marginals.push_back(marginal_from_json(m));
    if (static_cast<int>(marginals.size()) != dim) throw ContractViolation("gpc", "marginal count does not match N");
    MultiIndexSet lambda(dim, j.at("lambda").get<std::vector<MultiIndex>>(), IndexKind::Degrees);
    const auto& coeffs = j.at("coeffs");
    if (coeffs.size() != lambda.size() || lambda.size() != j.at("lambda").size())
        throw ContractViolation("gpc", "coeffs must align with a duplicate-free, sorted lambda");
    // Serialized lambda is canonical; a reordering would silently permute coefficients.
    if (j.at("lambda").get<std::vector<MultiIndex>>() != lambda.indices())
        throw ContractViolation("gpc", "lambda must be in canonical lexicographic order");
    Eigen::Index rows = 1;
    if (!coeffs.empty() && coeffs[0].is_array()) rows = static_cast<Eigen::Index>(coeffs[0].size());
    Matrix c(rows, static_cast<Eigen::Index>(lambda.size()));
    for (Eigen::Index k = 0; k < c.cols(); ++k) {
        const auto& entry = coeffs[static_cast<std::size_t>(k)];
        if (entry.is_array()) {
            if (static_cast<Eigen::Index>(entry.size()) != rows) throw ContractViolation("gpc", "ragged coefficient arrays");
            for (Eigen::Index r = 0; r < rows; ++r) c(r, k) = entry[static_cast<std::size_t>(r)].get<double>();
        } else {
            c(0, k) = entry.get<double>();
        }
    }
    return GpcExpansion{std::move(lambda), std::move(c), std::move(marginals)};
}

}  // namespace bifuq
