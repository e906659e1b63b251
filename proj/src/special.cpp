#include "spatialvote/special.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace spatialvote {

double log_bessel_i0(double x) {
    x = std::fabs(x);
    if (x < 12.0) {
        // power series: I0(x) = sum_k (x^2/4)^k / (k!)^2
        double t = x * x / 4.0;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 64; ++k) {
            term *= t / (static_cast<double>(k) * k);
            sum += term;
            if (term < sum * 1e-18) break;
        }
        return std::log(sum);
    }
    // asymptotic: I0(x) ~ e^x / sqrt(2 pi x) * (1 + 1/(8x) + 9/(128x^2) + ...)
    double r = 1.0 / x;
    double corr = 1.0 + r * (0.125 + r * (0.0703125 + r * (0.0732421875 + r * 0.112152099609375)));
    return x - 0.5 * std::log(kTwoPi * x) + std::log(corr);
}

double bessel_i1_over_i0(double x) {
    double sign = x < 0.0 ? -1.0 : 1.0;
    x = std::fabs(x);
    if (x < 12.0) {
        double t = x * x / 4.0;
        double term0 = 1.0, s0 = 1.0;
        double term1 = 1.0, s1 = 1.0;  // I1(x) = (x/2) sum_k (x^2/4)^k / (k!(k+1)!)
        for (int k = 1; k < 64; ++k) {
            term0 *= t / (static_cast<double>(k) * k);
            term1 *= t / (static_cast<double>(k) * (k + 1));
            s0 += term0;
            s1 += term1;
            if (term0 < s0 * 1e-18 && term1 < s1 * 1e-18) break;
        }
        return sign * (x / 2.0) * s1 / s0;
    }
    // large-argument expansion of the ratio
    double r = 1.0 / x;
    return sign * (1.0 - 0.5 * r - 0.125 * r * r - 0.125 * r * r * r);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw std::domain_error("normal_quantile: p outside [0,1]");
    }
    // Acklam's rational approximation followed by one Halley refinement.
    static const std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                            -2.759285104469687e+02, 1.383577518672690e+02,
                                            -3.066479806614716e+01, 2.506628277459239e+00};
    static const std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                            -1.556989798598866e+02, 6.680131188771972e+01,
                                            -1.328068155288572e+01};
    static const std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                            -2.400758277161838e+00, -2.549732539343734e+00,
                                            4.374664141464968e+00,  2.938163982698783e+00};
    static const std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                            2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley step on f(x) = Phi(x) - p
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(kTwoPi) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

namespace {

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16, fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double ibeta_reg(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw std::domain_error("ibeta_reg: parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double lnfront = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    double front = std::exp(lnfront);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace spatialvote
