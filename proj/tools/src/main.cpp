// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bifuq_app/commands.hpp"
#include "bifuq_app/config.hpp"

int main(int argc, char** argv) {
    using namespace bifuq::app;

    CLI::App app{"Bifurcation points, branches and gPC surrogates for the stochastic Allen-Cahn equation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    int threads = 0;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    app.add_option("--seed", seed, "sampling seed (overrides seed)")->check(CLI::NonNegativeNumber);
    app.add_option("--threads", threads, "concurrent collocation solves (overrides threads)")->check(CLI::PositiveNumber);

    auto* bifpoints = app.add_subcommand("bifpoints", "bifurcation-point statistics, pdfs and cdfs");
    auto* branch = app.add_subcommand("branch", "mean branches, branch samples and pdfs along branches");
    auto* converge = app.add_subcommand("converge", "RMS convergence of surrogates against a reference level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig config = config_path.empty() ? parse_config(nlohmann::json::object()) : load_config(config_path);
        if (!out_dir.empty()) config.output_dir = out_dir;
        if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
        if (threads > 0) config.threads = threads;
        if (converge->parsed())
            validate_converge(config);
        else
            validate(config);

        WrittenFiles files;
        if (bifpoints->parsed()) files = cmd_bifpoints(config, std::cerr);
        if (branch->parsed()) files = cmd_branch(config, std::cerr);
        if (converge->parsed()) files = cmd_converge(config, std::cerr);
        for (const auto& f : files) std::cout << f.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
