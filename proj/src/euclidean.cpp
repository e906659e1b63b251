#include "spatialvote/euclidean.hpp"

#include <cmath>
#include <numeric>

#include "spatialvote/leapfrog.hpp"
#include "spatialvote/special.hpp"

namespace spatialvote {

namespace {

constexpr double kProbEps = 1e-12;

double clamp_prob(double p) {
    if (p < kProbEps) return kProbEps;
    if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
    return p;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi); }

// phi(x) / Phi(x), stable far into the left tail.
double normal_hazard(double x) {
    if (x > -8.0) return normal_pdf(x) / normal_cdf(x);
    return -x - 1.0 / x;  // asymptotic Mills ratio
}

// d/deta of the Bernoulli log-likelihood for one cell.
double score(Link link, int y, double eta) {
    if (link == Link::Logit) {
        return static_cast<double>(y) - logistic(eta);
    }
    return y == 1 ? normal_hazard(eta) : -normal_hazard(-eta);
}

Eigen::VectorXd sample_mvn_from_precision(Rng& rng, const Eigen::MatrixXd& precision,
                                          const Eigen::VectorXd& rhs) {
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    Eigen::VectorXd mean = llt.solve(rhs);
    Eigen::VectorXd z(rhs.size());
    for (int i = 0; i < z.size(); ++i) z[i] = rng.normal();
    return mean + llt.matrixU().solve(z);
}

}  // namespace

double success_probability(Link link, double eta) {
    return clamp_prob(link == Link::Probit ? normal_cdf(eta) : 1.0 / (1.0 + std::exp(-eta)));
}

EuclideanPrior EuclideanPrior::standard(int d) {
    EuclideanPrior p;
    p.alpha0 = Eigen::VectorXd::Zero(d + 1);
    p.A0 = 25.0 * Eigen::MatrixXd::Identity(d + 1, d + 1);
    p.b = Eigen::VectorXd::Zero(d);
    p.B = Eigen::MatrixXd::Identity(d, d);
    return p;
}

double log_likelihood(const VoteMatrix& v, const ObservationMask& mask,
                      const EuclideanParams& params, Link link) {
    double ll = 0.0;
    const std::size_t n = v.n_legislators(), m = v.n_motions();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!mask.at(i, j)) continue;
            double eta = params.mu[j] + params.alpha.row(j).dot(params.beta.row(i));
            double p = success_probability(link, eta);
            ll += v.at(i, j) == Vote::Yea ? std::log(p) : std::log1p(-p);
        }
    }
    return ll;
}

EuclideanModel::EuclideanModel(const VoteMatrix& v, const ObservationMask& mask,
                               const EuclideanPrior& prior, Link link,
                               std::size_t anchor_positive, std::size_t anchor_negative)
    : v_(v),
      mask_(mask),
      prior_(prior),
      link_(link),
      anchor_pos_(anchor_positive),
      anchor_neg_(anchor_negative),
      d_(static_cast<int>(prior.b.size())) {
    for (std::size_t i = 0; i < v.n_legislators(); ++i)
        if (i != anchor_pos_ && i != anchor_neg_) free_rows_.push_back(i);
    dim_ = v.n_motions() * (1 + d_) + free_rows_.size() * d_;
    A0_inv_ = prior_.A0.inverse();
    B_inv_ = prior_.B.inverse();
    anchor_pos_value_ = Eigen::VectorXd::Zero(d_);
    anchor_pos_value_[0] = 1.0;
    anchor_neg_value_ = -anchor_pos_value_;
}

std::vector<double> EuclideanModel::pack(const EuclideanParams& p) const {
    std::vector<double> theta;
    theta.reserve(dim_);
    const std::size_t m = v_.n_motions();
    for (std::size_t j = 0; j < m; ++j) theta.push_back(p.mu[j]);
    for (std::size_t j = 0; j < m; ++j)
        for (int k = 0; k < d_; ++k) theta.push_back(p.alpha(j, k));
    for (std::size_t r : free_rows_)
        for (int k = 0; k < d_; ++k) theta.push_back(p.beta(r, k));
    return theta;
}

EuclideanParams EuclideanModel::unpack(const std::vector<double>& theta) const {
    const std::size_t m = v_.n_motions(), n = v_.n_legislators();
    EuclideanParams p;
    p.mu.resize(m);
    p.alpha.resize(m, d_);
    p.beta.resize(n, d_);
    std::size_t pos = 0;
    for (std::size_t j = 0; j < m; ++j) p.mu[j] = theta[pos++];
    for (std::size_t j = 0; j < m; ++j)
        for (int k = 0; k < d_; ++k) p.alpha(j, k) = theta[pos++];
    p.beta.row(anchor_pos_) = anchor_pos_value_.transpose();
    p.beta.row(anchor_neg_) = anchor_neg_value_.transpose();
    for (std::size_t r : free_rows_)
        for (int k = 0; k < d_; ++k) p.beta(r, k) = theta[pos++];
    return p;
}

double EuclideanModel::log_posterior(const std::vector<double>& theta) const {
    EuclideanParams p = unpack(theta);
    double lp = log_likelihood(v_, mask_, p, link_);
    const std::size_t m = v_.n_motions();
    for (std::size_t j = 0; j < m; ++j) {
        Eigen::VectorXd gamma(d_ + 1);
        gamma[0] = p.mu[j];
        gamma.tail(d_) = p.alpha.row(j).transpose();
        Eigen::VectorXd r = gamma - prior_.alpha0;
        lp -= 0.5 * r.dot(A0_inv_ * r);
    }
    for (std::size_t i : free_rows_) {
        Eigen::VectorXd r = p.beta.row(i).transpose() - prior_.b;
        lp -= 0.5 * r.dot(B_inv_ * r);
    }
    return lp;
}

std::vector<double> EuclideanModel::gradient(const std::vector<double>& theta) const {
    EuclideanParams p = unpack(theta);
    const std::size_t m = v_.n_motions();
    Eigen::VectorXd g_mu = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd g_alpha = Eigen::MatrixXd::Zero(m, d_);
    Eigen::MatrixXd g_beta = Eigen::MatrixXd::Zero(v_.n_legislators(), d_);

    for (std::size_t i = 0; i < v_.n_legislators(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!mask_.at(i, j)) continue;
            double eta = p.mu[j] + p.alpha.row(j).dot(p.beta.row(i));
            double w = score(link_, v_.at(i, j) == Vote::Yea ? 1 : 0, eta);
            g_mu[j] += w;
            g_alpha.row(j) += w * p.beta.row(i);
            g_beta.row(i) += w * p.alpha.row(j);
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        Eigen::VectorXd gamma(d_ + 1);
        gamma[0] = p.mu[j];
        gamma.tail(d_) = p.alpha.row(j).transpose();
        Eigen::VectorXd prior_score = -A0_inv_ * (gamma - prior_.alpha0);
        g_mu[j] += prior_score[0];
        g_alpha.row(j) += prior_score.tail(d_).transpose();
    }
    for (std::size_t i : free_rows_)
        g_beta.row(i) -= (B_inv_ * (p.beta.row(i).transpose() - prior_.b)).transpose();

    std::vector<double> grad;
    grad.reserve(dim_);
    for (std::size_t j = 0; j < m; ++j) grad.push_back(g_mu[j]);
    for (std::size_t j = 0; j < m; ++j)
        for (int k = 0; k < d_; ++k) grad.push_back(g_alpha(j, k));
    for (std::size_t r : free_rows_)
        for (int k = 0; k < d_; ++k) grad.push_back(g_beta(r, k));
    return grad;
}

namespace {

EuclideanParams initial_params(const VoteMatrix& v, const Metadata& meta, int d,
                               std::size_t anchor_pos, std::size_t anchor_neg) {
    const std::size_t n = v.n_legislators(), m = v.n_motions();
    EuclideanParams p;
    p.mu = Eigen::VectorXd::Zero(m);
    p.alpha = Eigen::MatrixXd::Zero(m, d);
    p.beta = Eigen::MatrixXd::Zero(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        Bloc b = meta.by_id(v.legislator_ids()[i]).bloc;
        if (b == Bloc::Coalition) p.beta(i, 0) = 1.0;
        if (b == Bloc::Opposition) p.beta(i, 0) = -1.0;
    }
    p.beta.row(anchor_pos).setZero();
    p.beta.row(anchor_neg).setZero();
    p.beta(anchor_pos, 0) = 1.0;
    p.beta(anchor_neg, 0) = -1.0;
    return p;
}

void run_probit_chain(const VoteMatrix& v, const ObservationMask& mask,
                      const EuclideanPrior& prior, const EuclideanConfig& cfg, Rng rng,
                      EuclideanParams state, std::size_t anchor_pos, std::size_t anchor_neg,
                      std::vector<EuclideanParams>& out) {
    const std::size_t n = v.n_legislators(), m = v.n_motions();
    const int d = cfg.d;
    Eigen::MatrixXd ystar = Eigen::MatrixXd::Zero(n, m);
    Eigen::MatrixXd A0_inv = prior.A0.inverse();
    Eigen::MatrixXd B_inv = prior.B.inverse();
    Eigen::VectorXd A0_inv_a0 = A0_inv * prior.alpha0;
    Eigen::VectorXd B_inv_b = B_inv * prior.b;

    for (int t = 0; t < cfg.iterations; ++t) {
        // latent utilities (Albert–Chib augmentation)
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (!mask.at(i, j)) continue;
                double eta = state.mu[j] + state.alpha.row(j).dot(state.beta.row(i));
                ystar(i, j) = rng.truncated_normal(
                    eta, 1.0,
                    v.at(i, j) == Vote::Yea ? Truncation::AboveZero : Truncation::BelowZero);
            }
        }
        // (mu_j, alpha_j) | rest: conjugate normal per motion
        for (std::size_t j = 0; j < m; ++j) {
            Eigen::MatrixXd prec = A0_inv;
            Eigen::VectorXd rhs = A0_inv_a0;
            Eigen::VectorXd x(d + 1);
            for (std::size_t i = 0; i < n; ++i) {
                if (!mask.at(i, j)) continue;
                x[0] = 1.0;
                x.tail(d) = state.beta.row(i).transpose();
                prec.noalias() += x * x.transpose();
                rhs.noalias() += x * ystar(i, j);
            }
            Eigen::VectorXd gamma = sample_mvn_from_precision(rng, prec, rhs);
            state.mu[j] = gamma[0];
            state.alpha.row(j) = gamma.tail(d).transpose();
        }
        // free beta_i | rest
        for (std::size_t i = 0; i < n; ++i) {
            if (i == anchor_pos || i == anchor_neg) continue;
            Eigen::MatrixXd prec = B_inv;
            Eigen::VectorXd rhs = B_inv_b;
            for (std::size_t j = 0; j < m; ++j) {
                if (!mask.at(i, j)) continue;
                Eigen::VectorXd a = state.alpha.row(j).transpose();
                prec.noalias() += a * a.transpose();
                rhs.noalias() += a * (ystar(i, j) - state.mu[j]);
            }
            state.beta.row(i) = sample_mvn_from_precision(rng, prec, rhs).transpose();
        }
        if (t >= cfg.warmup && (t - cfg.warmup) % cfg.keep_every == 0) out.push_back(state);
    }
}

void run_logit_chain(const EuclideanModel& model, const EuclideanConfig& cfg, Rng rng,
                     const EuclideanParams& init, std::vector<EuclideanParams>& out,
                     double& acceptance, double& frozen_step) {
    std::vector<double> theta = model.pack(init);
    GradFn potential_grad = [&model](const std::vector<double>& q) {
        auto g = model.gradient(q);
        for (double& x : g) x = -x;
        return g;
    };
    StepSizeAdapter adapter(cfg.step_size_init, cfg.target_accept);
    double step = cfg.step_size_init;
    double lp = model.log_posterior(theta);
    std::size_t proposals = 0, accepted = 0;
    for (int t = 0; t < cfg.iterations; ++t) {
        std::vector<double> p(theta.size());
        for (double& x : p) x = rng.normal();
        double h0 = -lp + kinetic_energy(p);
        std::vector<double> q = theta;
        double accept_prob = 0.0;
        if (leapfrog(q, p, potential_grad, step, cfg.n_leapfrog)) {
            double lp_new = model.log_posterior(q);
            double h1 = -lp_new + kinetic_energy(p);
            accept_prob = std::isfinite(h1) ? std::min(1.0, std::exp(h0 - h1)) : 0.0;
            if (rng.uniform() < accept_prob) {
                theta = std::move(q);
                lp = lp_new;
                if (t >= cfg.warmup) ++accepted;
            }
        }
        if (t < cfg.warmup) {
            step = adapter.update(accept_prob);
            if (t == cfg.warmup - 1) step = adapter.final_step();
        } else {
            ++proposals;
            if ((t - cfg.warmup) % cfg.keep_every == 0) out.push_back(model.unpack(theta));
        }
    }
    acceptance = proposals ? static_cast<double>(accepted) / proposals : 0.0;
    frozen_step = step;
}

}  // namespace

Eigen::MatrixXd EuclideanDraws::beta_draw_matrix(int dim) const {
    Eigen::MatrixXd out(draws.size(), draws.empty() ? 0 : draws[0].beta.rows());
    for (std::size_t t = 0; t < draws.size(); ++t) out.row(t) = draws[t].beta.col(dim).transpose();
    return out;
}

Eigen::VectorXd EuclideanDraws::beta_posterior_mean(int dim) const {
    return beta_draw_matrix(dim).colwise().mean().transpose();
}

EuclideanDraws fit_euclidean(const VoteMatrix& v, const Metadata& meta,
                             const EuclideanPrior& prior, const EuclideanConfig& config) {
    meta.require_covers(v);
    auto [anchor_pos, anchor_neg] = meta.anchor_indices(v);
    ObservationMask mask = complete_case_filter(v);
    EuclideanParams init = initial_params(v, meta, config.d, anchor_pos, anchor_neg);
    EuclideanModel model(v, mask, prior, config.link, anchor_pos, anchor_neg);

    EuclideanDraws result;
    result.config = config;
    result.anchor_positive = anchor_pos;
    result.anchor_negative = anchor_neg;
    Rng master(config.seed);

    std::vector<std::vector<std::vector<double>>> packed_by_chain;
    for (int c = 0; c < config.chains; ++c) {
        std::vector<EuclideanParams> chain_draws;
        double acc = 1.0, step = 0.0;
        Rng chain_rng = master.split(static_cast<std::uint64_t>(c));
        if (config.link == Link::Probit) {
            run_probit_chain(v, mask, prior, config, chain_rng, init, anchor_pos, anchor_neg,
                             chain_draws);
        } else {
            run_logit_chain(model, config, chain_rng, init, chain_draws, acc, step);
        }
        result.acceptance_rate.push_back(acc);
        result.step_size.push_back(step);
        std::vector<std::vector<double>> packed;
        packed.reserve(chain_draws.size());
        for (const auto& d : chain_draws) packed.push_back(model.pack(d));
        packed_by_chain.push_back(std::move(packed));
        for (auto& d : chain_draws) {
            result.draws.push_back(std::move(d));
            result.chain_of_draw.push_back(c);
        }
    }

    bool enough = true;
    for (const auto& c : packed_by_chain)
        if ((config.chains > 1 && c.size() < 100) || (config.chains == 1 && c.size() < 200))
            enough = false;
    if (enough) {
        std::vector<std::vector<std::vector<double>>>* chains = &packed_by_chain;
        result.diag = diagnostics(*chains);
        result.diag.acceptance_rate =
            config.link == Link::Probit
                ? 1.0
                : std::accumulate(result.acceptance_rate.begin(), result.acceptance_rate.end(),
                                  0.0) /
                      config.chains;
        result.convergence_warning = result.diag.fraction_rhat_above(1.1) > 0.05;
    }
    return result;
}

}  // namespace spatialvote
