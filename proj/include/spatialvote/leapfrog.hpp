#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace spatialvote {

/// Gradient of the potential energy U(q) = -log target(q).
using GradFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Leapfrog integration of Hamiltonian dynamics.
///
/// `circular` flags position coordinates living on the circle; when `wrap`
/// is set those coordinates are wrapped into [-pi, pi] after each position
/// update. When `von_mises_momentum` is set, circular coordinates use the
/// von Mises kinetic energy K(p) = 1 - cos(p) (velocity sin p) instead of
/// the Gaussian p^2/2 (velocity p).
///
/// Returns false on a non-finite gradient; q and p are then unspecified and
/// the caller must reject the proposal.
bool leapfrog(std::vector<double>& q, std::vector<double>& p, const GradFn& grad,
              double step_size, int n_steps, bool wrap = false,
              std::span<const std::uint8_t> circular = {}, bool von_mises_momentum = false);

/// Kinetic energy matching the leapfrog conventions above.
double kinetic_energy(std::span<const double> p, std::span<const std::uint8_t> circular = {},
                      bool von_mises_momentum = false);

/// Dual-averaging step-size adaptation (Nesterov scheme) used during warm-up.
class StepSizeAdapter {
public:
    explicit StepSizeAdapter(double initial_step, double target_accept = 0.75);

    /// Feed one acceptance probability; returns the step size for the next
    /// proposal.
    double update(double accept_prob);

    /// Smoothed step size to freeze after warm-up.
    double final_step() const;
    double current_step() const { return step_; }

private:
    double mu_, target_;
    double step_, log_step_bar_ = 0.0, h_bar_ = 0.0;
    int t_ = 0;
};

}  // namespace spatialvote
