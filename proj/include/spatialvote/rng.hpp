#pragma once

#include <array>
#include <cstdint>

namespace spatialvote {

/// Truncation side for truncated_normal().
enum class Truncation { AboveZero, BelowZero };

/// Deterministic 64-bit generator (xoshiro256++) with splitmix64 seeding.
/// Identical seed gives a bit-identical draw sequence; split() derives
/// statistically independent substreams for parallel chains.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Derive an independent substream keyed by `stream`.
    Rng split(std::uint64_t stream) const;

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 bits of randomness.
    double uniform();
    /// Uniform strictly inside (0, 1); never returns 0.
    double uniform_pos();
    double uniform(double lo, double hi);

    /// Standard normal via the polar (Marsaglia) method.
    double normal();
    double normal(double mean, double sd);

    /// Gamma(shape, rate); mean = shape / rate. Marsaglia–Tsang.
    double gamma(double shape, double rate);

    /// Normal(mean, sd) restricted to one side of zero. Inverse-CDF for mild
    /// truncation, exponential rejection when the cut is deep in the tail.
    double truncated_normal(double mean, double sd, Truncation side);

    /// Von Mises(mu, omega) via the Best–Fisher wrapped-Cauchy rejection
    /// sampler; returns an angle in [-pi, pi]. omega = 0 is uniform.
    double von_mises(double mu, double omega);

    std::uint64_t seed() const { return seed_; }

private:
    std::array<std::uint64_t, 4> s_;
    std::uint64_t seed_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace spatialvote
