// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bifuq/continuation.hpp"
#include "bifuq/density.hpp"
#include "bifuq/errors.hpp"
#include "bifuq/spatial.hpp"

namespace bifuq::app {

/// Malformed or inconsistent run configuration (exit code 2).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("cli", what) {}
};

struct DomainConfig {
    double a = 0.0;
    double b = 3.141592653589793;
    int m = 100;
};

struct ConvergeConfig {
    std::vector<int> w_list{1, 2, 3, 4, 5};
    int w_ref = 12;
    double s_probe = 5.0;
};

/// Everything a subcommand needs. Defaults reproduce the heterogeneous
/// cosine-field study on [0, pi] with m = 100.
struct RunConfig {
    DomainConfig domain;
    RandomFieldModel field = RandomFieldModel::cosine(Marginal::uniform(-1.0, 1.0),
                                                      Marginal::uniform(-1.5707963267948966, 1.5707963267948966));
    ContinuationSettings continuation = ContinuationSettings::with_endpoint(5.0, 0.05);
    int resample_rounds = 0;
    int w = 3;
    std::vector<int> branches{1, 2, 3};
    std::size_t samples = 10000;
    std::size_t branch_samples = 100;
    std::uint64_t seed = 20240601;
    std::filesystem::path output_dir = "out";
    DensitySettings density{DensityKind::GaussianKde, 256, 4.0};
    double observable_x0 = 1.5707963267948966;
    int solution_profiles = 6;
    bool full_state = false;
    ConvergeConfig converge;
    int threads = 1;

    SpatialGrid grid() const { return SpatialGrid(domain.a, domain.b, domain.m); }
};

/// Parses a config document; unknown keys anywhere are rejected.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Checks every precondition the subcommands rely on, before any compute.
void validate(const RunConfig& config);
/// validate() plus the checks specific to the converge subcommand.
void validate_converge(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

}  // namespace bifuq::app
