#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "spatialvote/diagnostics.hpp"
#include "spatialvote/leapfrog.hpp"
#include "spatialvote/rng.hpp"
#include "spatialvote/special.hpp"

using namespace spatialvote;

namespace {

// Simpson quadrature over [a, b].
double simpson(double a, double b, int intervals, const std::function<double(double)>& f) {
    if (intervals % 2) ++intervals;
    double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int k = 1; k < intervals; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double ks_statistic_uniform(std::vector<double> xs, double lo, double hi) {
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double cdf = (xs[i] - lo) / (hi - lo);
        d = std::max(d, std::fabs(cdf - static_cast<double>(i) / xs.size()));
        d = std::max(d, std::fabs(cdf - static_cast<double>(i + 1) / xs.size()));
    }
    return d;
}

}  // namespace

TEST_CASE("von Mises log-density: uniform case and mode") {
    CHECK(von_mises_logpdf(1.3, 0.0, 0.0) == doctest::Approx(std::log(1.0 / kTwoPi)).epsilon(1e-14));
    CHECK(von_mises_logpdf(-2.9, 0.0, 0.0) ==
          doctest::Approx(std::log(1.0 / kTwoPi)).epsilon(1e-14));
    double mu = 0.7, omega = 3.0;
    double at_mode = von_mises_logpdf(mu, mu, omega);
    for (double z : {-3.0, -1.0, 0.0, 1.0, 2.0}) CHECK(von_mises_logpdf(z, mu, omega) <= at_mode);
    CHECK_THROWS_AS(von_mises_logpdf(0.0, 0.0, -1.0), std::domain_error);
}

TEST_CASE("von Mises log-density matches quadrature normalization") {
    // density at pi/3 computed against a numerically normalized exp(w cos z)
    double omega = 2.5, z = kPi / 3.0;
    double norm = simpson(-kPi, kPi, 20000, [&](double t) { return std::exp(omega * std::cos(t)); });
    double expected = std::log(std::exp(omega * std::cos(z)) / norm);
    CHECK(von_mises_logpdf(z, 0.0, omega) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("von Mises density integrates to one across concentrations") {
    for (double omega : {0.0, 0.5, 2.0, 10.0, 100.0}) {
        double total = simpson(-kPi, kPi, 40000, [&](double t) {
            return std::exp(von_mises_logpdf(t, 0.3, omega));
        });
        CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("von Mises sampling: uniform limit, concentration, determinism") {
    Rng rng(42);
    std::vector<double> draws;
    for (int i = 0; i < 100000; ++i) draws.push_back(rng.von_mises(0.0, 0.0));
    CHECK(ks_statistic_uniform(draws, -kPi, kPi) < 0.01);

    Rng rng2(7);
    double s = 0.0, c = 0.0;
    for (int i = 0; i < 100000; ++i) {
        double x = rng2.von_mises(0.0, 50.0);
        s += std::sin(x);
        c += std::cos(x);
    }
    CHECK(std::fabs(std::atan2(s, c)) < 0.02);

    Rng a(99), b(99);
    for (int i = 0; i < 100; ++i) CHECK(a.von_mises(0.4, 2.0) == b.von_mises(0.4, 2.0));
}

TEST_CASE("truncated normal: support, mean, deep tail") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) CHECK(rng.truncated_normal(0.0, 1.0, Truncation::AboveZero) > 0.0);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) sum += rng.truncated_normal(5.0, 1.0, Truncation::AboveZero);
    CHECK(sum / 100000 == doctest::Approx(5.0).epsilon(0.004));
    // truncation point 8 sd into the tail must not loop or overflow
    for (int i = 0; i < 1000; ++i) {
        double x = rng.truncated_normal(-8.0, 1.0, Truncation::AboveZero);
        CHECK(x > 0.0);
        CHECK(std::isfinite(x));
    }
    for (int i = 0; i < 1000; ++i) CHECK(rng.truncated_normal(2.0, 1.0, Truncation::BelowZero) < 0.0);
}

TEST_CASE("gamma sampling: mean, exponential special case, determinism") {
    Rng rng(3);
    double sum = 0.0;
    for (int i = 0; i < 1000000; ++i) sum += rng.gamma(1.0, 0.1);
    CHECK(sum / 1000000 == doctest::Approx(10.0).epsilon(0.01));

    // shape 1 is exponential(rate): KS against the closed-form CDF
    std::vector<double> u;
    Rng rng2(4);
    for (int i = 0; i < 50000; ++i) u.push_back(1.0 - std::exp(-2.0 * rng2.gamma(1.0, 2.0)));
    CHECK(ks_statistic_uniform(u, 0.0, 1.0) < 0.01);

    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.gamma(2.5, 1.5) == b.gamma(2.5, 1.5));
}

TEST_CASE("leapfrog: harmonic oscillator energy drift") {
    // U(q) = q^2/2; analytic trajectory is a circle in phase space
    GradFn grad = [](const std::vector<double>& q) { return std::vector<double>{q[0]}; };
    double step = 0.05;
    std::vector<double> q{1.0}, p{0.0};
    double h0 = 0.5 * q[0] * q[0] + kinetic_energy(p);
    REQUIRE(leapfrog(q, p, grad, step, 100));
    double h1 = 0.5 * q[0] * q[0] + kinetic_energy(p);
    CHECK(std::fabs(h1 - h0) < step * step * 10.0);
}

TEST_CASE("leapfrog: zero steps is the identity") {
    GradFn grad = [](const std::vector<double>& q) { return std::vector<double>{q[0]}; };
    std::vector<double> q{0.3}, p{-0.7};
    REQUIRE(leapfrog(q, p, grad, 0.1, 0));
    CHECK(q[0] == 0.3);
    CHECK(p[0] == -0.7);
}

TEST_CASE("leapfrog: time reversibility") {
    GradFn grad = [](const std::vector<double>& q) {
        return std::vector<double>{q[0] + 0.3 * q[0] * q[0] * q[0], 2.0 * q[1]};
    };
    std::vector<double> q{0.8, -0.4}, p{0.2, 0.5};
    auto q0 = q, p0 = p;
    REQUIRE(leapfrog(q, p, grad, 0.05, 50));
    for (double& x : p) x = -x;
    REQUIRE(leapfrog(q, p, grad, 0.05, 50));
    CHECK(std::fabs(q[0] - q0[0]) < 1e-10);
    CHECK(std::fabs(q[1] - q0[1]) < 1e-10);
    CHECK(std::fabs(-p[0] - p0[0]) < 1e-10);
    CHECK(std::fabs(-p[1] - p0[1]) < 1e-10);
}

TEST_CASE("leapfrog: wrapped circular coordinate stays in range") {
    // potential periodic in the angle; pushing past pi must wrap
    GradFn grad = [](const std::vector<double>& q) {
        return std::vector<double>{std::sin(q[0])};
    };
    std::vector<std::uint8_t> circ{1};
    std::vector<double> q{3.1}, p{2.0};
    double u_before = -std::cos(q[0]);
    REQUIRE(leapfrog(q, p, grad, 0.2, 3, true, circ));
    CHECK(q[0] >= -kPi);
    CHECK(q[0] <= kPi);
    // potential is continuous across the wrap: recompute at wrapped position
    CHECK(std::isfinite(-std::cos(q[0])));
    CHECK(std::isfinite(u_before));
}

TEST_CASE("leapfrog: non-finite gradient signals failure") {
    GradFn grad = [](const std::vector<double>&) {
        return std::vector<double>{std::numeric_limits<double>::quiet_NaN()};
    };
    std::vector<double> q{0.0}, p{1.0};
    CHECK_FALSE(leapfrog(q, p, grad, 0.1, 5));
}

TEST_CASE("diagnostics: independent normal chains look converged") {
    Rng rng(11);
    std::vector<std::vector<double>> chains(4);
    for (auto& c : chains)
        for (int i = 0; i < 1000; ++i) c.push_back(rng.normal());
    auto d = diagnose_parameter(chains);
    CHECK(d.split_rhat > 0.99);
    CHECK(d.split_rhat < 1.01);
    CHECK(d.ess > 1000.0);
}

TEST_CASE("diagnostics: trending chain is flagged") {
    Rng rng(12);
    std::vector<std::vector<double>> chains(2);
    for (int i = 0; i < 1000; ++i) chains[0].push_back(0.005 * i + 0.1 * rng.normal());
    for (int i = 0; i < 1000; ++i) chains[1].push_back(rng.normal() * 0.1);
    auto d = diagnose_parameter(chains);
    CHECK(d.split_rhat > 1.1);
}

TEST_CASE("diagnostics: constant chains are degenerate") {
    std::vector<std::vector<double>> chains(2, std::vector<double>(500, 3.25));
    auto d = diagnose_parameter(chains);
    CHECK(d.degenerate);
    CHECK(std::isnan(d.ess));
    CHECK(std::isinf(d.split_rhat));
}

TEST_CASE("diagnostics: too few draws is an error") {
    std::vector<std::vector<double>> chains(2, std::vector<double>(50, 0.0));
    CHECK_THROWS(diagnose_parameter(chains));
}

TEST_CASE("thin") {
    std::vector<int> draws(64000);
    std::iota(draws.begin(), draws.end(), 0);
    CHECK(thin(draws, 5).size() == 12800);
    CHECK(thin(draws, 1) == draws);
    std::vector<int> ten(10);
    std::iota(ten.begin(), ten.end(), 0);
    CHECK(thin(ten, 3) == std::vector<int>{0, 3, 6, 9});
}

TEST_CASE("rng split substreams differ and reproduce") {
    Rng master(123);
    Rng c0 = master.split(0), c1 = master.split(1);
    CHECK(c0.next_u64() != c1.next_u64());
    Rng master2(123);
    Rng c0b = master2.split(0);
    Rng c0c = master.split(0);
    for (int i = 0; i < 50; ++i) CHECK(c0b.next_u64() == c0c.next_u64());
}

TEST_CASE("special functions: normal quantile and incomplete beta") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-10));
    CHECK(ibeta_reg(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(ibeta_reg(2.0, 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    // I_x(2,3) has closed form: 6x^2(1-x)^2 integrand; check against Simpson
    double x = 0.37;
    double ref = simpson(0.0, x, 20000, [](double t) { return 12.0 * t * (1.0 - t) * (1.0 - t); });
    CHECK(ibeta_reg(2.0, 3.0, x) == doctest::Approx(ref).epsilon(1e-9));
}
