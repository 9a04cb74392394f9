// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "bifuq_app/config.hpp"

namespace bifuq::app {

/// Files produced by a subcommand, in the order they were written.
using WrittenFiles = std::vector<std::filesystem::path>;

/// bifpoints.csv, bifpoints_samples.csv, bifpoints_pdf.csv, bifpoints_cdf.csv
/// (plus bifpoints_surrogate.json for the collocation path).
WrittenFiles cmd_bifpoints(const RunConfig& config, std::ostream& log);

/// branch_<i>_mean.csv, branch_<i>_samples.csv, branch_<i>_pdf_s.csv per
/// branch index and branch_solutions.csv.
WrittenFiles cmd_branch(const RunConfig& config, std::ostream& log);

/// converge.csv.
WrittenFiles cmd_converge(const RunConfig& config, std::ostream& log);

/// Maps an exception to the process exit code: 2 for configuration errors,
/// 3 for numerical or other runtime failures.
int exit_code_for(const std::exception& e);

}  // namespace bifuq::app
