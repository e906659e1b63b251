#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "spatialvote/data.hpp"
#include "spatialvote/diagnostics.hpp"
#include "spatialvote/rng.hpp"

namespace spatialvote {

/// Shortest arc length between two angles, arccos(cos(a-b)) in [0, pi].
double geodesic_distance(double a, double b);

/// Squared geodesic distance to the Nay position minus squared geodesic
/// distance to the Yea position; lies in [-pi^2, pi^2].
double z_statistic(double beta_i, double psi_j, double zeta_j);

/// Scaled symmetric Beta density on [-pi^2, pi^2] with concentration kappa.
double link_logpdf(double z, double kappa);
inline double link_density(double z, double kappa) { return std::exp(link_logpdf(z, kappa)); }

/// CDF of the scaled symmetric Beta link.
double link_cdf(double z, double kappa);

/// d/dkappa of link_cdf, used by the kappa block of the HMC gradient.
double link_cdf_dkappa(double z, double kappa);

struct CircularParams {
    std::vector<double> beta;   // n angles in [-pi, pi]
    std::vector<double> psi;    // m Yea angles
    std::vector<double> zeta;   // m Nay angles
    std::vector<double> kappa;  // m link concentrations > 0
    double omega_beta = 1.0;    // ideal-point prior concentration >= 0
    double beta_kappa = 1.0;    // hyper-rate > 0
};

struct CircularPriorConfig {
    // Rate parameterization throughout (mean = shape / rate); set
    // scale_convention to read the Gamma second parameters as scales instead.
    double omega_beta_rate = 1.0 / 10.0;
    double beta_kappa_rate = 25.0;
    bool scale_convention = false;

    double effective_omega_rate() const {
        return scale_convention ? 1.0 / omega_beta_rate : omega_beta_rate;
    }
    double effective_beta_kappa_rate() const {
        return scale_convention ? 1.0 / beta_kappa_rate : beta_kappa_rate;
    }
};

struct CircularConfig {
    int chains = 1;
    int iterations = 30000;
    int burnin = 10000;
    std::uint64_t seed = 1;
    double step_size_init = 0.02;
    int n_leapfrog = 8;
    double target_accept = 0.75;
    bool impute = true;
    CircularPriorConfig prior;

    int retained_per_chain() const { return iterations - burnin; }
};

/// Joint posterior over [beta, psi, zeta, log kappa, log omega_beta,
/// log beta_kappa] with the cell likelihood restricted to observed (or
/// imputed) votes. Imputed votes for Missing cells live in `imputed`,
/// indexed by `missing_cells`.
class CircularModel {
public:
    CircularModel(const VoteMatrix& v, const ObservationMask& mask,
                  const CircularPriorConfig& prior, bool use_imputation);

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    std::size_t dim() const { return n_ + 3 * m_ + 2; }

    /// Flat list of (i, j) pairs for Missing cells, in row-major order.
    const std::vector<std::pair<std::size_t, std::size_t>>& missing_cells() const {
        return missing_cells_;
    }

    std::vector<double> pack(const CircularParams& p) const;
    CircularParams unpack(const std::vector<double>& theta) const;

    /// Coordinate flags: 1 for angular coordinates (wrapped, von Mises
    /// momenta), 0 for log-scale coordinates.
    const std::vector<std::uint8_t>& circular_mask() const { return circular_; }

    double log_posterior(const std::vector<double>& theta,
                         const std::vector<std::uint8_t>& imputed) const;
    std::vector<double> gradient(const std::vector<double>& theta,
                                 const std::vector<std::uint8_t>& imputed) const;

    /// Bernoulli(G_kappa(z)) draw for every Missing cell under the current
    /// parameters; refreshed each iteration before the parameter update.
    std::vector<std::uint8_t> impute_missing(Rng& rng, const CircularParams& params) const;

private:
    int cell_vote(std::size_t i, std::size_t j, const std::vector<std::uint8_t>& imputed,
                  bool& include) const;

    const VoteMatrix& v_;
    const ObservationMask& mask_;
    CircularPriorConfig prior_;
    bool use_imputation_;
    std::size_t n_, m_;
    std::vector<std::pair<std::size_t, std::size_t>> missing_cells_;
    std::vector<std::int32_t> missing_index_;  // cell -> index into imputed, -1 otherwise
    std::vector<std::uint8_t> circular_;
};

struct CircularDraw {
    CircularParams params;
    std::vector<std::uint8_t> imputed;  // aligned with missing_cells; empty if impute=false
};

struct CircularDraws {
    std::vector<CircularDraw> draws;  // all chains concatenated
    std::vector<int> chain_of_draw;
    std::vector<std::pair<std::size_t, std::size_t>> missing_cells;
    CircularConfig config;
    std::vector<double> acceptance_rate;  // per chain, post burn-in
    std::vector<double> step_size;
    ChainDiagnostics diag;
    bool convergence_warning = false;

    /// draws x n matrix of raw (unidentified) beta angles.
    std::vector<std::vector<double>> beta_draw_matrix() const;
};

/// One joint HMC update over all blocks; angular coordinates get von Mises
/// momenta and wrapped leapfrog updates, log-scale coordinates standard
/// normal momenta. Returns whether the proposal was accepted; on integrator
/// failure the state is left unchanged.
bool hmc_step_circular(Rng& rng, const CircularModel& model, std::vector<double>& theta,
                       double& log_post, const std::vector<std::uint8_t>& imputed,
                       double step_size, int n_leapfrog, double& accept_prob);

CircularDraws fit_circular(const VoteMatrix& v, const Metadata& meta, const CircularConfig& config);

}  // namespace spatialvote
