// SPDX-License-Identifier: Apache-2.0
#include "bifuq/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bifuq/errors.hpp"

namespace bifuq {

namespace {

std::vector<double> sorted_copy(std::span<const double> samples) {
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    return s;
}

double sample_sd(std::span<const double> s) {
    const double n = static_cast<double>(s.size());
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : s) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (n - 1.0));
}

}  // namespace

double DensityEstimate::integral() const {
    if (kind == DensityKind::Histogram) {
        double total = 0.0;
        for (std::size_t k = 0; k < density.size(); ++k) total += density[k] * (bin_edges[k + 1] - bin_edges[k]);
        return total;
    }
    double total = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) total += 0.5 * (density[k] + density[k - 1]) * (grid[k] - grid[k - 1]);
    return total;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw ContractViolation("uq", "quantile of empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double silverman_bandwidth(std::span<const double> samples) {
    const auto s = sorted_copy(samples);
    const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
    double spread = sample_sd(s);
    if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
    return 0.9 * spread * std::pow(static_cast<double>(s.size()), -0.2);
}

DensityEstimate estimate_density(std::span<const double> samples, const DensitySettings& settings) {
    if (samples.size() < 2) throw ContractViolation("uq", "density estimate needs at least two samples");
    const auto s = sorted_copy(samples);
    const double lo = s.front();
    const double hi = s.back();
    if (!(hi > lo)) throw DegenerateSample("uq", "all samples are equal; density is a point mass");
    const double n = static_cast<double>(s.size());

    DensityEstimate est;
    est.kind = settings.kind;
    est.sample_count = s.size();

    if (settings.kind == DensityKind::Histogram) {
        const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
        double width = 2.0 * iqr * std::pow(n, -1.0 / 3.0);
        std::size_t bins = 1;
        if (width > 0.0) bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
        bins = std::clamp<std::size_t>(bins, 1, 100000);
        width = (hi - lo) / static_cast<double>(bins);
        est.bin_edges.resize(bins + 1);
        for (std::size_t k = 0; k <= bins; ++k) est.bin_edges[k] = lo + static_cast<double>(k) * width;
        est.bin_edges.back() = hi;
        std::vector<double> counts(bins, 0.0);
        for (double v : s) {
            auto k = static_cast<std::size_t>((v - lo) / width);
            counts[std::min(k, bins - 1)] += 1.0;
        }
        est.grid.resize(bins);
        est.density.resize(bins);
        for (std::size_t k = 0; k < bins; ++k) {
            est.grid[k] = 0.5 * (est.bin_edges[k] + est.bin_edges[k + 1]);
            est.density[k] = counts[k] / (n * (est.bin_edges[k + 1] - est.bin_edges[k]));
        }
        return est;
    }

    const double h = silverman_bandwidth(s);
    if (!(h > 0.0)) throw DegenerateSample("uq", "zero kde bandwidth");
    est.bandwidth = h;
    const int points = std::max(settings.grid_points, 2);
    const double g0 = lo - settings.tail_bandwidths * h;
    const double g1 = hi + settings.tail_bandwidths * h;
    const double norm = 1.0 / (n * h * std::sqrt(2.0 * std::numbers::pi));
    const double reach = 8.0 * h;  // exp(-32) is below double resolution of the sum
    est.grid.resize(static_cast<std::size_t>(points));
    est.density.resize(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        const double x = g0 + (g1 - g0) * k / (points - 1);
        auto first = std::lower_bound(s.begin(), s.end(), x - reach);
        auto last = std::upper_bound(s.begin(), s.end(), x + reach);
        double sum = 0.0;
        for (auto it = first; it != last; ++it) {
            const double z = (x - *it) / h;
            sum += std::exp(-0.5 * z * z);
        }
        est.grid[static_cast<std::size_t>(k)] = x;
        est.density[static_cast<std::size_t>(k)] = sum * norm;
    }
    return est;
}

double empirical_cdf(std::span<const double> samples, double x) {
    if (samples.empty()) throw ContractViolation("uq", "empirical cdf of empty sample");
    const auto count = std::count_if(samples.begin(), samples.end(), [x](double v) { return v <= x; });
    return static_cast<double>(count) / static_cast<double>(samples.size());
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
    const auto s = sorted_copy(samples);
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double f = cdf(s[k]);
        d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
    }
    return d;
}

double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b) {
    const auto sa = sorted_copy(a);
    const auto sb = sorted_copy(b);
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

}  // namespace bifuq
