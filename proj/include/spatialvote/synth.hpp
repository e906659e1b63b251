#pragma once

#include <cstdint>
#include <vector>

#include "spatialvote/data.hpp"
#include "spatialvote/euclidean.hpp"

namespace spatialvote {

enum class Geometry { Euclidean, Circular };

struct BlocSpec {
    std::size_t size = 0;
    double center = 0.0;  // ideal-point (Euclidean) or angle (circular)
    double spread = 0.25;
};

struct SynthConfig {
    std::size_t n = 0, m = 0;
    Geometry geometry = Geometry::Euclidean;
    std::vector<BlocSpec> blocs;
    Link link = Link::Probit;        // Euclidean geometry only
    double kappa_shape = 1.0;        // circular link concentration Gamma prior
    double kappa_rate = 0.5;
    double missing_rate = 0.0;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SynthTruth {
    // Euclidean: mu/alpha/beta; circular: beta/psi/zeta/kappa (angles).
    std::vector<double> beta;
    std::vector<double> mu, alpha;
    std::vector<double> psi, zeta, kappa;
};

struct SynthResult {
    VoteMatrix votes;
    Metadata meta;
    SynthTruth truth;
};

/// Simulate a roll-call matrix from the exact forward model of the chosen
/// geometry. Blocs become metadata; the legislators with the extreme true
/// positions are designated as anchors; the scandal flag is thresholded
/// from the true position plus noise.
SynthResult generate(const SynthConfig& cfg);

struct GridSpec {
    double half_width = 6.0;
    int points = 41;
};

struct QuadraturePosterior {
    std::vector<double> beta_mean;   // free legislators only, in row order
    std::vector<std::size_t> free_rows;
    std::vector<double> mu_mean, alpha_mean;  // per motion
};

/// Brute-force posterior means for a tiny Euclidean instance (d = 1,
/// anchors fixed). The posterior factorizes over motions given the free
/// ideal points, so the free beta block is gridded jointly (at most two
/// free legislators) and each motion's (mu_j, alpha_j) is integrated on its
/// own two-dimensional grid. The Bernoulli-link arithmetic here is written
/// out independently of the fitting code.
QuadraturePosterior quadrature_posterior(const VoteMatrix& v, const Metadata& meta,
                                         const EuclideanPrior& prior, Link link,
                                         const GridSpec& grid = {});

}  // namespace spatialvote
