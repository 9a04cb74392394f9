// SPDX-License-Identifier: Apache-2.0
#include "bifuq_app/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "bifuq/gpc.hpp"

namespace bifuq::app {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

Marginal parse_marginal(const json& j, const std::string& where) {
    check_keys(j, {"dist", "lo", "hi", "mean", "sd"}, where);
    try {
        return marginal_from_json(j);
    } catch (const json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    } catch (const Error& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

}  // namespace

RunConfig parse_config(const json& doc) {
    check_keys(doc, {"domain", "field", "continuation", "sparse_grid", "branches", "samples", "branch_samples", "seed",
                     "output_dir", "density", "observable_x0", "solution_profiles", "full_state", "converge",
                     "threads"},
               "config");
    RunConfig c;

    if (doc.contains("domain")) {
        const auto& d = doc["domain"];
        check_keys(d, {"a", "b", "m"}, "domain");
        c.domain.a = get(d, "a", "domain", c.domain.a);
        c.domain.b = get(d, "b", "domain", c.domain.b);
        c.domain.m = get(d, "m", "domain", c.domain.m);
    }

    if (doc.contains("field")) {
        const auto& f = doc["field"];
        check_keys(f, {"kind", "marginals"}, "field");
        const std::string kind = get<std::string>(f, "kind", "field", "cosine");
        if (kind == "homogeneous")
            c.field.kind = FieldKind::Homogeneous;
        else if (kind == "cosine")
            c.field.kind = FieldKind::CosineHeterogeneous;
        else
            throw ConfigError("field.kind must be 'homogeneous' or 'cosine', got '" + kind + "'");
        if (!f.contains("marginals")) throw ConfigError("field.marginals is required with field");
        if (!f["marginals"].is_array()) throw ConfigError("field.marginals must be an array");
        c.field.marginals.clear();
        for (std::size_t n = 0; n < f["marginals"].size(); ++n)
            c.field.marginals.push_back(parse_marginal(f["marginals"][n], "field.marginals[" + std::to_string(n) + "]"));
    }

    if (doc.contains("continuation")) {
        const auto& k = doc["continuation"];
        check_keys(k, {"xi", "ds", "S", "newton_tol", "newton_max_iter", "max_step_halvings", "resample_rounds"},
                   "continuation");
        const double ds = get(k, "ds", "continuation", c.continuation.ds);
        const double S = get(k, "S", "continuation", c.continuation.arclength_end());
        if (!(ds > 0.0) || !(S >= 0.0)) throw ConfigError("continuation needs ds > 0 and S >= 0");
        const double steps = S / ds;
        if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
            throw ConfigError("continuation.S must be an integer multiple of continuation.ds");
        c.continuation.ds = ds;
        c.continuation.n_steps = static_cast<int>(std::round(steps));
        c.continuation.xi = get(k, "xi", "continuation", c.continuation.xi);
        c.continuation.newton_tol = get(k, "newton_tol", "continuation", c.continuation.newton_tol);
        c.continuation.newton_max_iter = get(k, "newton_max_iter", "continuation", c.continuation.newton_max_iter);
        c.continuation.max_step_halvings = get(k, "max_step_halvings", "continuation", c.continuation.max_step_halvings);
        c.resample_rounds = get(k, "resample_rounds", "continuation", c.resample_rounds);
    }

    if (doc.contains("sparse_grid")) {
        check_keys(doc["sparse_grid"], {"w"}, "sparse_grid");
        c.w = get(doc["sparse_grid"], "w", "sparse_grid", c.w);
    }

    c.branches = get(doc, "branches", "config", c.branches);
    c.samples = get(doc, "samples", "config", c.samples);
    c.branch_samples = get(doc, "branch_samples", "config", c.branch_samples);
    c.seed = get(doc, "seed", "config", c.seed);
    c.output_dir = get<std::string>(doc, "output_dir", "config", c.output_dir.string());
    c.observable_x0 = get(doc, "observable_x0", "config", c.observable_x0);
    c.solution_profiles = get(doc, "solution_profiles", "config", c.solution_profiles);
    c.full_state = get(doc, "full_state", "config", c.full_state);
    c.threads = get(doc, "threads", "config", c.threads);

    if (doc.contains("density")) {
        const auto& d = doc["density"];
        check_keys(d, {"kind", "grid_points"}, "density");
        const std::string kind = get<std::string>(d, "kind", "density", "kde");
        if (kind == "kde")
            c.density.kind = DensityKind::GaussianKde;
        else if (kind == "histogram")
            c.density.kind = DensityKind::Histogram;
        else
            throw ConfigError("density.kind must be 'kde' or 'histogram'");
        c.density.grid_points = get(d, "grid_points", "density", c.density.grid_points);
    }

    if (doc.contains("converge")) {
        const auto& v = doc["converge"];
        check_keys(v, {"w_list", "w_ref", "s_probe"}, "converge");
        c.converge.w_list = get(v, "w_list", "converge", c.converge.w_list);
        c.converge.w_ref = get(v, "w_ref", "converge", c.converge.w_ref);
        c.converge.s_probe = get(v, "s_probe", "converge", c.converge.s_probe);
    }

    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(doc);
}

void validate(const RunConfig& c) {
    if (c.domain.m < 1) throw ConfigError("domain.m must be >= 1");
    if (!(c.domain.b > c.domain.a)) throw ConfigError("domain needs a < b");
    const std::size_t expected = c.field.kind == FieldKind::Homogeneous ? 1 : 2;
    if (c.field.marginals.size() != expected)
        throw ConfigError("field kind needs " + std::to_string(expected) + " marginal(s), got " +
                          std::to_string(c.field.marginals.size()));
    if (c.field.kind == FieldKind::CosineHeterogeneous)
        for (const auto& mg : c.field.marginals)
            if (mg.kind != MarginalKind::Uniform)
                throw ConfigError("the collocation pipeline supports uniform marginals only");
    try {
        c.continuation.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (c.resample_rounds < 0) throw ConfigError("continuation.resample_rounds must be >= 0");
    if (c.w < 0) throw ConfigError("sparse_grid.w must be >= 0");
    if (c.branches.empty()) throw ConfigError("branches must list at least one branch index");
    for (int i : c.branches)
        if (i < 1 || i > c.domain.m) throw ConfigError("branch index " + std::to_string(i) + " outside 1..m");
    if (c.samples < 2) throw ConfigError("samples must be >= 2");
    if (c.branch_samples < 1) throw ConfigError("branch_samples must be >= 1");
    if (c.density.grid_points < 2) throw ConfigError("density.grid_points must be >= 2");
    if (c.solution_profiles < 1) throw ConfigError("solution_profiles must be >= 1");
    if (c.threads < 1) throw ConfigError("threads must be >= 1");
}

void validate_converge(const RunConfig& c) {
    validate(c);
    if (c.samples < 1000) throw ConfigError("converge needs samples >= 1000");
    if (c.converge.w_list.empty()) throw ConfigError("converge.w_list must not be empty");
    for (int w : c.converge.w_list)
        if (w < 0 || w > c.converge.w_ref) throw ConfigError("converge.w_list entries must lie in [0, w_ref]");
    const double probe = c.converge.s_probe / c.continuation.ds;
    if (c.converge.s_probe < 0.0 || std::abs(probe - std::round(probe)) > 1e-9 * std::max(1.0, probe) ||
        std::round(probe) > c.continuation.n_steps)
        throw ConfigError("converge.s_probe must be a multiple of ds within [0, S]");
}

nlohmann::json to_json(const RunConfig& c) {
    json marginals = json::array();
    for (const auto& mg : c.field.marginals) marginals.push_back(marginal_to_json(mg));
    return {
        {"domain", {{"a", c.domain.a}, {"b", c.domain.b}, {"m", c.domain.m}}},
        {"field",
         {{"kind", c.field.kind == FieldKind::Homogeneous ? "homogeneous" : "cosine"}, {"marginals", marginals}}},
        {"continuation",
         {{"xi", c.continuation.xi},
          {"ds", c.continuation.ds},
          {"S", c.continuation.arclength_end()},
          {"newton_tol", c.continuation.newton_tol},
          {"newton_max_iter", c.continuation.newton_max_iter},
          {"max_step_halvings", c.continuation.max_step_halvings},
          {"resample_rounds", c.resample_rounds}}},
        {"sparse_grid", {{"w", c.w}}},
        {"branches", c.branches},
        {"samples", c.samples},
        {"branch_samples", c.branch_samples},
        {"seed", c.seed},
        {"output_dir", c.output_dir.string()},
        {"density",
         {{"kind", c.density.kind == DensityKind::GaussianKde ? "kde" : "histogram"},
          {"grid_points", c.density.grid_points}}},
        {"observable_x0", c.observable_x0},
        {"solution_profiles", c.solution_profiles},
        {"full_state", c.full_state},
        {"converge", {{"w_list", c.converge.w_list}, {"w_ref", c.converge.w_ref}, {"s_probe", c.converge.s_probe}}},
        {"threads", c.threads},
    };
}

}  // namespace bifuq::app
