// SPDX-License-Identifier: Apache-2.0
#include "bifuq_app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "bifuq/continuation.hpp"
#include "bifuq/eigen.hpp"
#include "bifuq/gpc.hpp"
#include "bifuq/uq.hpp"
#include "bifuq_app/csv.hpp"

namespace bifuq::app {

namespace {

namespace fs = std::filesystem;

/// The deterministic problem g = 0, used as the reference of the homogeneous path.
DiscreteSystem zero_field_system(const SpatialGrid& grid) {
    return DiscreteSystem(grid, RandomFieldModel::homogeneous(Marginal::uniform(0.0, 0.0)), {0.0});
}

fs::path prepare_output(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw Error("cli", "cannot create output directory " + config.output_dir.string() + ": " + ec.message());
    return config.output_dir;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
    return out;
}

std::vector<std::string> input_columns(int dim) {
    std::vector<std::string> cols;
    for (int n = 1; n <= dim; ++n) cols.push_back("y_" + std::to_string(n));
    return cols;
}

/// Writes (prefix..., p, density) rows for a law given by its pdf and support.
template <class Pdf>
void write_analytic_pdf(CsvWriter& csv, const std::vector<double>& prefix, double lo, double hi, bool atom, Pdf&& pdf,
                        int points) {
    if (atom) {
        for (double v : prefix) csv.add(v);
        csv.add(lo).add(std::numeric_limits<double>::infinity()).end_row();
        return;
    }
    const double pad = 0.05 * (hi - lo);
    for (double t : linspace(lo - pad, hi + pad, points)) {
        for (double v : prefix) csv.add(v);
        csv.add(t).add(pdf(t)).end_row();
    }
}

void write_estimated_pdf(CsvWriter& csv, const std::vector<double>& prefix, std::span<const double> samples,
                         const DensitySettings& settings) {
    try {
        const DensityEstimate est = estimate_density(samples, settings);
        for (std::size_t k = 0; k < est.grid.size(); ++k) {
            for (double v : prefix) csv.add(v);
            csv.add(est.grid[k]).add(est.density[k]).end_row();
        }
    } catch (const DegenerateSample&) {
        for (double v : prefix) csv.add(v);
        csv.add(samples.front()).add(std::numeric_limits<double>::infinity()).end_row();
    }
}

ObservableChoice point_observable(const RunConfig& c) { return {ObservableKind::PointValue, c.observable_x0}; }
constexpr ObservableChoice kL2{ObservableKind::L2Norm, 0.0};

void warn_if_off_node(const SpatialGrid& grid, const RunConfig& c, std::ostream& log) {
    const auto curve = branch_observable(grid, std::span<const Vector>{}, point_observable(c));
    if (curve.nearest_node)
        log << "[cli] warning: observable_x0=" << format_real(c.observable_x0)
            << " is not a grid node; using nearest node x=" << format_real(grid.node(curve.node)) << "\n";
}

std::vector<std::string> mean_header(const RunConfig& c) {
    std::vector<std::string> h{"s", "p", "l2norm", "u_x0"};
    if (c.full_state)
        for (int j = 1; j <= c.domain.m; ++j) h.push_back("u_" + std::to_string(j));
    return h;
}

void write_mean_curve(const fs::path& path, const RunConfig& c, const SpatialGrid& grid,
                      const std::vector<double>& s_values, const std::vector<double>& p, const std::vector<Vector>& u) {
    CsvWriter csv(path, mean_header(c));
    for (std::size_t l = 0; l < s_values.size(); ++l) {
        csv.add(s_values[l]).add(p[l]).add(observable(grid, u[l], kL2)).add(observable(grid, u[l], point_observable(c)));
        if (c.full_state)
            for (Eigen::Index j = 0; j < u[l].size(); ++j) csv.add(u[l][j]);
        csv.end_row();
    }
}

std::vector<std::size_t> profile_indices(std::size_t n_s, int profiles) {
    std::vector<std::size_t> out;
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(profiles), n_s);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t l = count == 1 ? 0 : static_cast<std::size_t>(std::llround(static_cast<double>(k) * static_cast<double>(n_s - 1) / static_cast<double>(count - 1)));
        if (out.empty() || out.back() != l) out.push_back(l);
    }
    return out;
}

void write_profiles(CsvWriter& csv, int index, const SpatialGrid& grid, const std::vector<double>& s_values,
                    const std::vector<double>& p, const std::vector<Vector>& u, int profiles) {
    for (std::size_t l : profile_indices(s_values.size(), profiles)) {
        csv.add(index).add(s_values[l]).add(p[l]).add(grid.a()).add(0.0).end_row();
        for (int j = 0; j < grid.m(); ++j) csv.add(index).add(s_values[l]).add(p[l]).add(grid.node(j)).add(u[l][j]).end_row();
        csv.add(index).add(s_values[l]).add(p[l]).add(grid.b()).add(0.0).end_row();
    }
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    return 3;
}

WrittenFiles cmd_bifpoints(const RunConfig& config, std::ostream& log) {
    validate(config);
    const SpatialGrid grid = config.grid();
    const int dim = config.field.dim();
    const int kmax = *std::max_element(config.branches.begin(), config.branches.end());
    const Matrix inputs = draw_inputs(config.field.marginals, config.samples, config.seed);
    const auto n = static_cast<Eigen::Index>(config.samples);

    std::vector<double> means, variances;
    Matrix values(static_cast<Eigen::Index>(config.branches.size()), n);
    std::vector<BifPointLaw> laws;
    std::vector<BifPointSurrogate> surrogates;

    if (config.field.kind == FieldKind::Homogeneous) {
        const auto ref = bifurcation_points(grid, zero_field_system(grid).field(), std::vector<double>{0.0}, kmax);
        log << "[bifpoints] homogeneous field: analytic law from 1 eigenvalue problem\n";
        for (std::size_t r = 0; r < config.branches.size(); ++r) {
            const double lambda = -ref[static_cast<std::size_t>(config.branches[r] - 1)].p_star;
            laws.push_back(homogeneous_bifpoint_pdf(config.field, lambda));
            means.push_back(laws.back().mean());
            variances.push_back(laws.back().variance());
            values.row(static_cast<Eigen::Index>(r)) = (-lambda - inputs.row(0).array()).matrix();
        }
    } else {
        CollocationLog work;
        surrogates = fit_bifpoint_surrogates(grid, config.field, config.w, config.branches, config.threads, &work);
        log << "[bifpoints] " << work.eigen_solves << " collocation solves (eigenvalue problems), |Lambda|="
            << surrogates.front().expansion.lambda.size() << "\n";
        for (std::size_t r = 0; r < surrogates.size(); ++r) {
            means.push_back(surrogates[r].expansion.mean()[0]);
            variances.push_back(surrogates[r].expansion.variance()[0]);
            values.row(static_cast<Eigen::Index>(r)) = eval_gpc_batch(surrogates[r].expansion, inputs);
        }
    }

    const fs::path dir = prepare_output(config);
    WrittenFiles files;

    {
        files.push_back(dir / "bifpoints.csv");
        CsvWriter csv(files.back(), {"i", "mean", "variance"});
        for (std::size_t r = 0; r < config.branches.size(); ++r)
            csv.add(config.branches[r]).add(means[r]).add(variances[r]).end_row();
    }
    {
        files.push_back(dir / "bifpoints_samples.csv");
        std::vector<std::string> header{"sample"};
        for (const auto& col : input_columns(dim)) header.push_back(col);
        for (int i : config.branches) header.push_back("p_star_" + std::to_string(i));
        CsvWriter csv(files.back(), header);
        for (Eigen::Index k = 0; k < n; ++k) {
            csv.add(static_cast<long long>(k));
            for (Eigen::Index d = 0; d < dim; ++d) csv.add(inputs(d, k));
            for (Eigen::Index r = 0; r < values.rows(); ++r) csv.add(values(r, k));
            csv.end_row();
        }
    }
    {
        files.push_back(dir / "bifpoints_pdf.csv");
        CsvWriter csv(files.back(), {"i", "p", "density"});
        for (std::size_t r = 0; r < config.branches.size(); ++r) {
            const std::vector<double> prefix{static_cast<double>(config.branches[r])};
            if (!laws.empty()) {
                const auto& law = laws[r];
                write_analytic_pdf(csv, prefix, law.lo(), law.hi(), law.point_mass(),
                                   [&](double t) { return law.pdf(t); }, config.density.grid_points);
            } else {
                const Vector row = values.row(static_cast<Eigen::Index>(r));
                write_estimated_pdf(csv, prefix, std::span<const double>(row.data(), static_cast<std::size_t>(row.size())),
                                    config.density);
            }
        }
    }
    {
        files.push_back(dir / "bifpoints_cdf.csv");
        CsvWriter csv(files.back(), {"i", "p", "cdf"});
        for (std::size_t r = 0; r < config.branches.size(); ++r) {
            Vector row = values.row(static_cast<Eigen::Index>(r));
            std::vector<double> sorted(row.data(), row.data() + row.size());
            std::sort(sorted.begin(), sorted.end());
            double lo = sorted.front(), hi = sorted.back();
            if (!laws.empty()) {
                lo = laws[r].lo();
                hi = laws[r].hi();
            }
            const double pad = hi > lo ? 0.05 * (hi - lo) : 0.5;
            for (double t : linspace(lo - pad, hi + pad, config.density.grid_points)) {
                double value;
                if (!laws.empty()) {
                    value = probability_of_bifurcating(laws[r], t);
                } else {
                    const auto count = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
                    value = static_cast<double>(count) / static_cast<double>(sorted.size());
                }
                csv.add(config.branches[r]).add(t).add(value).end_row();
            }
        }
    }
    if (!surrogates.empty()) {
        files.push_back(dir / "bifpoints_surrogate.json");
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& s : surrogates) doc.push_back({{"i", s.index}, {"expansion", to_json(s.expansion)}});
        std::ofstream(files.back(), std::ios::binary | std::ios::trunc) << doc.dump(1) << '\n';
    }
    return files;
}

WrittenFiles cmd_branch(const RunConfig& config, std::ostream& log) {
    validate(config);
    const SpatialGrid grid = config.grid();
    const int dim = config.field.dim();
    warn_if_off_node(grid, config, log);
    const Matrix sample_inputs = draw_inputs(config.field.marginals, config.branch_samples, config.seed);
    const fs::path dir = prepare_output(config);
    WrittenFiles files;

    std::vector<std::string> sample_header{"sample"};
    for (const auto& col : input_columns(dim)) sample_header.push_back(col);
    for (const char* col : {"s", "p", "l2norm", "u_x0"}) sample_header.emplace_back(col);
    const std::vector<std::string> pdf_header{"s", "p_mean", "u_x0_mean", "p", "density"};

    const fs::path solutions_path = dir / "branch_solutions.csv";
    CsvWriter solutions(solutions_path, {"i", "s", "p", "x", "u"});

    for (int index : config.branches) {
        const std::string stem = "branch_" + std::to_string(index);
        std::vector<double> s_values, mean_p;
        std::vector<Vector> mean_u;

        if (config.field.kind == FieldKind::Homogeneous) {
            const DiscreteSystem ref_system = zero_field_system(grid);
            const auto bif = bifurcation_points(grid, ref_system.field(), ref_system.y(), index).back();
            const Branch reference = trace_branch(ref_system, bif, config.continuation);
            log << "[branch] branch " << index << ": 1 continuation (homogeneous shift law)\n";

            const Marginal& input = config.field.marginals.front();
            s_values = reference.s_values;
            mean_u = reference.states;
            for (double p : reference.p_values) mean_p.push_back(p - input.expectation());

            files.push_back(dir / (stem + "_samples.csv"));
            CsvWriter samples(files.back(), sample_header);
            const auto ensemble = homogeneous_branch_ensemble(reference, config.field, sample_inputs);
            for (std::size_t k = 0; k < ensemble.size(); ++k) {
                const auto& b = ensemble[k];
                for (std::size_t l = 0; l < b.size(); ++l) {
                    samples.add(k).add(b.y[0]).add(b.s_values[l]).add(b.p_values[l]);
                    samples.add(observable(grid, b.states[l], kL2)).add(observable(grid, b.states[l], point_observable(config)));
                    samples.end_row();
                }
            }

            files.push_back(dir / (stem + "_pdf_s.csv"));
            CsvWriter pdf(files.back(), pdf_header);
            const BifPointLaw law = homogeneous_bifpoint_pdf(config.field, -bif.p_star);
            for (std::size_t l = 0; l < s_values.size(); ++l) {
                const double shift = reference.p_values[l] - bif.p_star;
                const std::vector<double> prefix{s_values[l], mean_p[l], observable(grid, mean_u[l], point_observable(config))};
                write_analytic_pdf(pdf, prefix, law.lo() + shift, law.hi() + shift, law.point_mass(),
                                   [&](double t) { return law.pdf(t - shift); }, config.density.grid_points);
            }
        } else {
            CollocationLog work;
            const SparseGridApprox sg = build_sparse_grid(dim, config.w, config.field.marginals);
            const auto branches = collocate_branches(grid, config.field, sg, index, config.continuation, config.threads,
                                                     &work, config.resample_rounds);
            log << "[branch] branch " << index << ": " << work.continuations << " continuations at "
                << sg.size() << " collocation points\n";
            const BranchSurrogate surrogate = branch_surrogate_from(sg, branches);
            s_values = surrogate.s_values;
            mean_p = surrogate.mean_p();
            mean_u = surrogate.mean_states();

            files.push_back(dir / (stem + "_samples.csv"));
            CsvWriter samples(files.back(), sample_header);
            std::vector<Matrix> r_at, u_at;
            for (std::size_t l = 0; l < surrogate.size(); ++l) {
                r_at.push_back(eval_gpc_batch(surrogate.r_expansions[l], sample_inputs));
                u_at.push_back(eval_gpc_batch(surrogate.u_expansions[l], sample_inputs));
            }
            for (Eigen::Index k = 0; k < sample_inputs.cols(); ++k) {
                for (std::size_t l = 0; l < surrogate.size(); ++l) {
                    const Vector u = u_at[l].col(k);
                    samples.add(static_cast<long long>(k));
                    for (Eigen::Index d = 0; d < dim; ++d) samples.add(sample_inputs(d, k));
                    samples.add(s_values[l]).add(r_at[l](0, k));
                    samples.add(observable(grid, u, kL2)).add(observable(grid, u, point_observable(config)));
                    samples.end_row();
                }
            }

            files.push_back(dir / (stem + "_pdf_s.csv"));
            CsvWriter pdf(files.back(), pdf_header);
            const Matrix pdf_inputs = draw_inputs(config.field.marginals, config.samples, config.seed);
            for (std::size_t l = 0; l < surrogate.size(); ++l) {
                const Matrix r = eval_gpc_batch(surrogate.r_expansions[l], pdf_inputs);
                const std::vector<double> prefix{s_values[l], mean_p[l], observable(grid, mean_u[l], point_observable(config))};
                write_estimated_pdf(pdf, prefix, std::span<const double>(r.data(), static_cast<std::size_t>(r.size())),
                                    config.density);
            }
        }

        files.push_back(dir / (stem + "_mean.csv"));
        write_mean_curve(files.back(), config, grid, s_values, mean_p, mean_u);
        write_profiles(solutions, index, grid, s_values, mean_p, mean_u, config.solution_profiles);
    }
    files.push_back(solutions_path);
    return files;
}

WrittenFiles cmd_converge(const RunConfig& config, std::ostream& log) {
    validate_converge(config);
    const SpatialGrid grid = config.grid();
    ConvergenceOptions options;
    options.w_list = config.converge.w_list;
    options.w_ref = config.converge.w_ref;
    options.s_probe = config.converge.s_probe;
    options.n_mc = config.samples;
    options.seed = config.seed;
    options.threads = config.threads;

    CollocationLog work;
    const int index = config.branches.front();
    const auto rows = convergence_study(grid, config.field, index, options, config.continuation, &work);
    log << "[converge] branch " << index << ": " << work.eigen_solves << " eigenvalue problems, "
        << work.continuations << " continuations (w_ref=" << options.w_ref << ")\n";

    const fs::path dir = prepare_output(config);
    WrittenFiles files{dir / "converge.csv"};
    CsvWriter csv(files.back(), {"w", "lambda_cardinality", "rms_p_star", "rms_r_at_s", "rms_u_at_s"});
    for (const auto& row : rows)
        csv.add(row.w).add(row.lambda_cardinality).add(row.rms_p_star).add(row.rms_r).add(row.rms_u).end_row();
    return files;
}

}  // namespace bifuq::app
