#include "spatialvote/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "spatialvote/special.hpp"

namespace spatialvote {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
}

Rng Rng::split(std::uint64_t stream) const {
    std::uint64_t sm = seed_ ^ (0xd1342543de82ef95ULL * (stream + 1));
    return Rng(splitmix64(sm));
}

std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform_pos() {
    double u;
    do {
        u = uniform();
    } while (u <= 0.0);
    return u;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * f;
    has_cached_normal_ = true;
    return u * f;
}

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

double Rng::gamma(double shape, double rate) {
    if (shape <= 0.0 || rate <= 0.0) throw std::domain_error("gamma: shape and rate must be > 0");
    if (shape < 1.0) {
        // boost: X_a = X_{a+1} * U^{1/a}
        double u = uniform_pos();
        return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = uniform_pos();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

double Rng::truncated_normal(double mean, double sd, Truncation side) {
    if (sd <= 0.0) throw std::domain_error("truncated_normal: sd must be > 0");
    // Reduce to sampling Z >= a in standard units.
    bool flip = (side == Truncation::BelowZero);
    double a = flip ? mean / sd : -mean / sd;  // lower bound after standardization
    double z;
    if (a < 4.0) {
        double plo = normal_cdf(a);
        double u = plo + (1.0 - plo) * uniform_pos();
        if (u >= 1.0) u = std::nextafter(1.0, 0.0);
        z = normal_quantile(u);
        if (z < a) z = a;  // inverse-CDF roundoff near the bound
    } else {
        // Robert's exponential rejection, robust far into the tail.
        for (;;) {
            double alpha = (a + std::sqrt(a * a + 4.0)) / 2.0;
            double e = -std::log(uniform_pos()) / alpha;
            double x = a + e;
            double rho = std::exp(-(x - alpha) * (x - alpha) / 2.0);
            if (uniform() <= rho) {
                z = x;
                break;
            }
        }
    }
    return flip ? mean - sd * z : mean + sd * z;
}

double Rng::von_mises(double mu, double omega) {
    if (omega < 0.0) throw std::domain_error("von_mises: omega must be >= 0");
    if (omega < 1e-8) return uniform(-kPi, kPi);
    double tau = 1.0 + std::sqrt(1.0 + 4.0 * omega * omega);
    double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * omega);
    double r = (1.0 + rho * rho) / (2.0 * rho);
    double f;
    for (;;) {
        double u1 = uniform_pos();
        double z = std::cos(kPi * u1);
        f = (1.0 + r * z) / (r + z);
        double c = omega * (r - f);
        double u2 = uniform_pos();
        if (c * (2.0 - c) - u2 > 0.0) break;
        if (std::log(c / u2) + 1.0 - c >= 0.0) break;
    }
    double u3 = uniform();
    double angle = (u3 < 0.5 ? -1.0 : 1.0) * std::acos(f);
    return wrap_angle(mu + angle);
}

}  // namespace spatialvote
