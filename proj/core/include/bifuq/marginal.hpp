// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace bifuq {

/// Seedable generator with a portable mapping to [0,1): the raw 64-bit
/// Mersenne Twister stream is standardized, and we avoid the
/// implementation-defined std:: distributions on top of it.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal by the polar Box-Muller method.
    double standard_normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

enum class MarginalKind { Uniform, TruncatedGaussian };

/// Distribution of one input random variable. Support is always the bounded
/// interval [lo, hi]; lo == hi is allowed and models a point mass.
struct Marginal {
    MarginalKind kind = MarginalKind::Uniform;
    double lo = -1.0;
    double hi = 1.0;
    double mean = 0.0;  // location of the untruncated Gaussian
    double sd = 1.0;    // scale of the untruncated Gaussian

    static Marginal uniform(double lo, double hi);
    static Marginal truncated_gaussian(double mean, double sd, double lo, double hi);

    bool degenerate() const { return lo == hi; }
    double center() const { return 0.5 * (lo + hi); }
    double half_width() const { return 0.5 * (hi - lo); }

    /// Inclusive support test with a roundoff allowance relative to the bounds.
    bool contains(double y) const;

    /// Affine map from the support onto [-1,1]; a point mass maps to 0.
    double to_canonical(double y) const;
    double from_canonical(double t) const { return center() + half_width() * t; }

    double pdf(double y) const;
    double cdf(double y) const;
    double expectation() const;
    double variance() const;

    double draw(Rng& rng) const;

    std::string describe() const;
};

}  // namespace bifuq
