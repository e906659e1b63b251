#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spatialvote/data.hpp"
#include "spatialvote/diagnostics.hpp"
#include "spatialvote/rng.hpp"

namespace spatialvote {

enum class Link { Probit, Logit };

/// mu_j + alpha_j . beta_i
inline double linear_predictor(double mu_j, const Eigen::VectorXd& alpha_j,
                               const Eigen::VectorXd& beta_i) {
    return mu_j + alpha_j.dot(beta_i);
}

/// Link CDF evaluated at the linear predictor, clamped to [eps, 1-eps].
double success_probability(Link link, double eta);

struct EuclideanParams {
    Eigen::VectorXd mu;     // m
    Eigen::MatrixXd alpha;  // m x d
    Eigen::MatrixXd beta;   // n x d
};

struct EuclideanPrior {
    Eigen::VectorXd alpha0;  // d+1 prior mean for (mu_j, alpha_j)
    Eigen::MatrixXd A0;      // (d+1) x (d+1)
    Eigen::VectorXd b;       // d prior mean for beta_i
    Eigen::MatrixXd B;       // d x d

    /// alpha0 = 0, A0 = 25 I, b = 0, B = I.
    static EuclideanPrior standard(int d);
};

struct EuclideanConfig {
    Link link = Link::Logit;
    int d = 1;
    int chains = 4;
    int iterations = 80000;
    int warmup = 16000;
    int keep_every = 5;
    std::uint64_t seed = 1;
    int n_leapfrog = 20;            // logit HMC only
    double step_size_init = 0.05;   // logit HMC only
    double target_accept = 0.75;

    int retained_per_chain() const { return (iterations - warmup) / keep_every; }
};

struct EuclideanDraws {
    std::vector<EuclideanParams> draws;   // all chains concatenated in chain order
    std::vector<int> chain_of_draw;
    EuclideanConfig config;
    std::vector<double> acceptance_rate;  // per chain; 1.0 for Gibbs
    std::vector<double> step_size;        // per chain, frozen after warm-up
    ChainDiagnostics diag;
    bool convergence_warning = false;
    std::size_t anchor_positive = 0, anchor_negative = 0;

    Eigen::MatrixXd beta_draw_matrix(int dim = 0) const;  // draws x n
    Eigen::VectorXd beta_posterior_mean(int dim = 0) const;
};

double log_likelihood(const VoteMatrix& v, const ObservationMask& mask,
                      const EuclideanParams& params, Link link);

/// Log posterior and exact gradient over the free-parameter vector
/// [mu, alpha (row-major), beta_free (row-major)]; anchored rows of beta are
/// excluded from the packing.
class EuclideanModel {
public:
    EuclideanModel(const VoteMatrix& v, const ObservationMask& mask, const EuclideanPrior& prior,
                   Link link, std::size_t anchor_positive, std::size_t anchor_negative);

    std::size_t dim() const { return dim_; }

    std::vector<double> pack(const EuclideanParams& p) const;
    EuclideanParams unpack(const std::vector<double>& theta) const;

    double log_posterior(const std::vector<double>& theta) const;
    std::vector<double> gradient(const std::vector<double>& theta) const;

    const std::vector<std::size_t>& free_rows() const { return free_rows_; }

private:
    const VoteMatrix& v_;
    const ObservationMask& mask_;
    EuclideanPrior prior_;
    Link link_;
    std::size_t anchor_pos_, anchor_neg_;
    std::vector<std::size_t> free_rows_;
    int d_;
    std::size_t dim_;
    Eigen::MatrixXd A0_inv_, B_inv_;
    Eigen::VectorXd anchor_pos_value_, anchor_neg_value_;
};

EuclideanDraws fit_euclidean(const VoteMatrix& v, const Metadata& meta,
                             const EuclideanPrior& prior, const EuclideanConfig& config);

}  // namespace spatialvote
