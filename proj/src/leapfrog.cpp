#include "spatialvote/leapfrog.hpp"

#include <cmath>

#include "spatialvote/special.hpp"

namespace spatialvote {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

bool leapfrog(std::vector<double>& q, std::vector<double>& p, const GradFn& grad,
              double step_size, int n_steps, bool wrap,
              std::span<const std::uint8_t> circular, bool von_mises_momentum) {
    const std::size_t dim = q.size();
    auto is_circ = [&](std::size_t i) { return !circular.empty() && circular[i]; };

    if (n_steps == 0) return true;

    std::vector<double> g = grad(q);
    if (!all_finite(g)) return false;
    for (int step = 0; step < n_steps; ++step) {
        for (std::size_t i = 0; i < dim; ++i) p[i] -= 0.5 * step_size * g[i];
        for (std::size_t i = 0; i < dim; ++i) {
            double v = (von_mises_momentum && is_circ(i)) ? std::sin(p[i]) : p[i];
            q[i] += step_size * v;
            if (wrap && is_circ(i)) q[i] = wrap_angle(q[i]);
        }
        g = grad(q);
        if (!all_finite(g)) return false;
        for (std::size_t i = 0; i < dim; ++i) p[i] -= 0.5 * step_size * g[i];
    }
    return true;
}

double kinetic_energy(std::span<const double> p, std::span<const std::uint8_t> circular,
                      bool von_mises_momentum) {
    double k = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        bool circ = !circular.empty() && circular[i];
        if (von_mises_momentum && circ)
            k += 1.0 - std::cos(p[i]);
        else
            k += 0.5 * p[i] * p[i];
    }
    return k;
}

StepSizeAdapter::StepSizeAdapter(double initial_step, double target_accept)
    : mu_(std::log(10.0 * initial_step)), target_(target_accept), step_(initial_step) {}

double StepSizeAdapter::update(double accept_prob) {
    constexpr double gamma = 0.05, t0 = 10.0, kappa = 0.75;
    ++t_;
    double eta = 1.0 / (t_ + t0);
    h_bar_ = (1.0 - eta) * h_bar_ + eta * (target_ - accept_prob);
    double log_step = mu_ - std::sqrt(static_cast<double>(t_)) / gamma * h_bar_;
    double w = std::pow(static_cast<double>(t_), -kappa);
    log_step_bar_ = w * log_step + (1.0 - w) * log_step_bar_;
    step_ = std::exp(log_step);
    return step_;
}

double StepSizeAdapter::final_step() const { return std::exp(log_step_bar_); }

}  // namespace spatialvote
