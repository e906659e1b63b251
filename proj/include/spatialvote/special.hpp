#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

// Scalar special functions shared by the samplers and both model likelihoods.
// Everything here is pure and thread-safe.

namespace spatialvote {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kPiSq = std::numbers::pi * std::numbers::pi;

/// Wrap an angle into [-pi, pi].
inline double wrap_angle(double theta) {
    double w = std::remainder(theta, kTwoPi);
    if (w < -kPi) w += kTwoPi;   // remainder returns [-pi, pi]; guard the edge
    return w;
}

/// log I0(x), modified Bessel function of the first kind, order zero.
/// Series for small arguments, asymptotic expansion for large ones.
double log_bessel_i0(double x);

/// Ratio I1(x)/I0(x); the derivative of log_bessel_i0.
double bessel_i1_over_i0(double x);

/// Standard normal CDF.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Standard normal quantile function (inverse CDF).
double normal_quantile(double p);

/// log Beta(a, b).
inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation with the usual symmetry switch for convergence.
double ibeta_reg(double a, double b, double x);

/// Von Mises log-density at angle z with mean mu and concentration omega >= 0.
/// omega = 0 degenerates to the uniform density on the circle.
inline double von_mises_logpdf(double z, double mu, double omega) {
    if (omega < 0.0) throw std::domain_error("von_mises_logpdf: omega must be >= 0");
    return omega * std::cos(z - mu) - std::log(kTwoPi) - log_bessel_i0(omega);
}

/// Logistic function with clamping for log-likelihood stability.
inline double logistic(double eta) {
    constexpr double eps = 1e-12;
    double p = 1.0 / (1.0 + std::exp(-eta));
    if (p < eps) return eps;
    if (p > 1.0 - eps) return 1.0 - eps;
    return p;
}

}  // namespace spatialvote
