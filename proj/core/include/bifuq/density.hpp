// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bifuq {

enum class DensityKind { Histogram, GaussianKde };

struct DensitySettings {
    DensityKind kind = DensityKind::GaussianKde;
    int grid_points = 512;          // kde evaluation grid
    double tail_bandwidths = 4.0;   // kde grid extends this many bandwidths past the data
};

/// Sampled density. For a histogram `grid` holds the bin centers and
/// `bin_edges` the edges; for a kde `grid` is a uniform evaluation grid.
struct DensityEstimate {
    DensityKind kind = DensityKind::GaussianKde;
    std::vector<double> grid;
    std::vector<double> density;
    std::vector<double> bin_edges;
    std::size_t sample_count = 0;
    double bandwidth = 0.0;

    /// Sum of bin masses for a histogram, trapezoidal rule for a kde.
    double integral() const;
};

/// Freedman-Diaconis histogram or Gaussian kde with Silverman's bandwidth.
/// Throws DegenerateSample when all samples coincide, ContractViolation for n < 2.
DensityEstimate estimate_density(std::span<const double> samples, const DensitySettings& settings = {});

/// 0.9 min(sd, IQR / 1.34) n^(-1/5).
double silverman_bandwidth(std::span<const double> samples);

/// Linear-interpolation quantile of sorted data (type 7).
double quantile_sorted(std::span<const double> sorted, double q);

/// Fraction of samples <= x.
double empirical_cdf(std::span<const double> samples, double x);

/// sup_x |F_n(x) - F(x)| against an analytic cdf.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// sup_x |F_a(x) - F_b(x)|.
double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace bifuq
