// SPDX-License-Identifier: Apache-2.0
#include "bifuq/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bifuq/errors.hpp"

namespace bifuq {

namespace {

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

double Rng::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

Marginal Marginal::uniform(double lo, double hi) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw ContractViolation("spatial", "uniform marginal needs finite lo <= hi");
    Marginal d;
    d.kind = MarginalKind::Uniform;
    d.lo = lo;
    d.hi = hi;
    d.mean = 0.5 * (lo + hi);
    d.sd = (hi - lo) / std::sqrt(12.0);
    return d;
}

Marginal Marginal::truncated_gaussian(double mean, double sd, double lo, double hi) {
    if (!(lo < hi) || !(sd > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
        throw ContractViolation("spatial", "truncated Gaussian needs sd > 0 and finite lo < hi");
    Marginal d;
    d.kind = MarginalKind::TruncatedGaussian;
    d.lo = lo;
    d.hi = hi;
    d.mean = mean;
    d.sd = sd;
    return d;
}

bool Marginal::contains(double y) const {
    const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    return y >= lo - tol && y <= hi + tol;
}

double Marginal::to_canonical(double y) const {
    if (degenerate()) return 0.0;
    return std::clamp((y - center()) / half_width(), -1.0, 1.0);
}

double Marginal::pdf(double y) const {
    if (y < lo || y > hi) return 0.0;
    if (kind == MarginalKind::Uniform) {
        if (degenerate()) return std::numeric_limits<double>::infinity();
        return 1.0 / (hi - lo);
    }
    const double a = (lo - mean) / sd;
    const double b = (hi - mean) / sd;
    return std_normal_pdf((y - mean) / sd) / (sd * (std_normal_cdf(b) - std_normal_cdf(a)));
}

double Marginal::cdf(double y) const {
    if (y < lo) return 0.0;
    if (y >= hi) return 1.0;
    if (kind == MarginalKind::Uniform) return (y - lo) / (hi - lo);
    const double a = std_normal_cdf((lo - mean) / sd);
    const double b = std_normal_cdf((hi - mean) / sd);
    return (std_normal_cdf((y - mean) / sd) - a) / (b - a);
}

double Marginal::expectation() const {
    if (kind == MarginalKind::Uniform) return center();
    const double a = (lo - mean) / sd;
    const double b = (hi - mean) / sd;
    const double z = std_normal_cdf(b) - std_normal_cdf(a);
    return mean + sd * (std_normal_pdf(a) - std_normal_pdf(b)) / z;
}

double Marginal::variance() const {
    if (kind == MarginalKind::Uniform) return (hi - lo) * (hi - lo) / 12.0;
    const double a = (lo - mean) / sd;
    const double b = (hi - mean) / sd;
    const double z = std_normal_cdf(b) - std_normal_cdf(a);
    const double pa = std_normal_pdf(a);
    const double pb = std_normal_pdf(b);
    const double r = (pa - pb) / z;
    return sd * sd * (1.0 + (a * pa - b * pb) / z - r * r);
}

double Marginal::draw(Rng& rng) const {
    if (kind == MarginalKind::Uniform) return rng.uniform(lo, hi);
    // Rejection from the parent Gaussian; acceptance is high for the
    // truncations used here (about 0.95 for [-2,2] standard).
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        const double y = mean + sd * rng.standard_normal();
        if (y >= lo && y <= hi) return y;
    }
    throw NumericalFailure("spatial", "truncated Gaussian rejection sampler exhausted");
}

std::string Marginal::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (kind == MarginalKind::Uniform)
        os << "Unif(" << lo << "," << hi << ")";
    else
        os << "TruncNormal(" << mean << "," << sd << ";" << lo << "," << hi << ")";
    return os.str();
}

}  // namespace bifuq
