#include "spatialvote/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "spatialvote/circular.hpp"
#include "spatialvote/rng.hpp"
#include "spatialvote/special.hpp"

namespace spatialvote {

void SynthConfig::validate() const {
    if (n == 0 || m == 0) throw ConfigError("synth: n and m must be positive");
    if (missing_rate < 0.0 || missing_rate >= 1.0)
        throw ConfigError("synth: missing_rate must lie in [0, 1)");
    std::size_t total = 0;
    for (const auto& b : blocs) total += b.size;
    if (total != n) throw ConfigError("synth: bloc sizes must sum to n");
}

namespace {

std::string padded_id(const char* prefix, std::size_t k) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%03zu", prefix, k + 1);
    return buf;
}

Bloc bloc_for_center(double center) {
    if (center > 0.05) return Bloc::Coalition;
    if (center < -0.05) return Bloc::Opposition;
    return Bloc::Independent;
}

}  // namespace

SynthResult generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    SynthResult out;
    SynthTruth& truth = out.truth;

    std::vector<LegislatorMeta> meta_rows(cfg.n);
    truth.beta.resize(cfg.n);
    std::size_t row = 0;
    for (const auto& bloc : cfg.blocs) {
        for (std::size_t k = 0; k < bloc.size; ++k, ++row) {
            if (cfg.geometry == Geometry::Euclidean) {
                truth.beta[row] = rng.normal(bloc.center, bloc.spread);
            } else {
                double omega = bloc.spread > 0.0 ? 1.0 / (bloc.spread * bloc.spread) : 0.0;
                truth.beta[row] = rng.von_mises(bloc.center, omega);
            }
            meta_rows[row].id = padded_id("L", row);
            meta_rows[row].name = "legislator " + std::to_string(row + 1);
            meta_rows[row].party = "P" + std::to_string(&bloc - cfg.blocs.data() + 1);
            meta_rows[row].bloc = bloc_for_center(bloc.center);
        }
    }
    for (std::size_t i = 0; i < cfg.n; ++i)
        meta_rows[i].scandal_flag = rng.uniform() < logistic(1.5 * truth.beta[i]);

    std::vector<std::string> motion_ids(cfg.m);
    for (std::size_t j = 0; j < cfg.m; ++j) motion_ids[j] = padded_id("V", j);

    std::vector<Vote> cells(cfg.n * cfg.m, Vote::Missing);
    if (cfg.geometry == Geometry::Euclidean) {
        truth.mu.resize(cfg.m);
        truth.alpha.resize(cfg.m);
        for (std::size_t j = 0; j < cfg.m; ++j) {
            truth.mu[j] = rng.normal(0.0, 1.0);
            truth.alpha[j] = rng.normal(0.0, 2.0);
        }
        for (std::size_t i = 0; i < cfg.n; ++i)
            for (std::size_t j = 0; j < cfg.m; ++j) {
                double p = success_probability(cfg.link, truth.mu[j] + truth.alpha[j] * truth.beta[i]);
                cells[i * cfg.m + j] = rng.uniform() < p ? Vote::Yea : Vote::Nay;
            }
    } else {
        truth.psi.resize(cfg.m);
        truth.zeta.resize(cfg.m);
        truth.kappa.resize(cfg.m);
        for (std::size_t j = 0; j < cfg.m; ++j) {
            double axis = rng.uniform(-kPi, kPi);
            truth.psi[j] = axis;
            truth.zeta[j] = wrap_angle(axis + kPi + rng.normal(0.0, 0.5));
            truth.kappa[j] = rng.gamma(cfg.kappa_shape, cfg.kappa_rate);
        }
        for (std::size_t i = 0; i < cfg.n; ++i)
            for (std::size_t j = 0; j < cfg.m; ++j) {
                double z = z_statistic(truth.beta[i], truth.psi[j], truth.zeta[j]);
                double p = link_cdf(z, truth.kappa[j]);
                cells[i * cfg.m + j] = rng.uniform() < p ? Vote::Yea : Vote::Nay;
            }
    }
    if (cfg.missing_rate > 0.0) {
        for (auto& c : cells)
            if (rng.uniform() < cfg.missing_rate) c = Vote::Missing;
    }

    // anchors at the extreme true positions
    std::size_t hi = 0, lo = 0;
    for (std::size_t i = 1; i < cfg.n; ++i) {
        if (truth.beta[i] > truth.beta[hi]) hi = i;
        if (truth.beta[i] < truth.beta[lo]) lo = i;
    }
    meta_rows[hi].anchor = AnchorRole::Positive;
    meta_rows[lo].anchor = AnchorRole::Negative;

    std::vector<std::string> legislator_ids(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) legislator_ids[i] = meta_rows[i].id;
    out.votes = VoteMatrix(std::move(legislator_ids), std::move(motion_ids), std::move(cells));
    out.meta = Metadata(std::move(meta_rows));
    return out;
}

namespace {

// Link arithmetic local to the oracle; deliberately duplicated rather than
// shared with the fitting code so the oracle is an independent check.
double oracle_prob(Link link, double eta) {
    double p = link == Link::Probit ? 0.5 * std::erfc(-eta / std::numbers::sqrt2)
                                    : 1.0 / (1.0 + std::exp(-eta));
    if (p < 1e-300) p = 1e-300;
    if (p > 1.0 - 1e-16) p = 1.0 - 1e-16;
    return p;
}

double normal_density(double x, double mean, double var) {
    double d = x - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(kTwoPi * var);
}

}  // namespace

QuadraturePosterior quadrature_posterior(const VoteMatrix& v, const Metadata& meta,
                                         const EuclideanPrior& prior, Link link,
                                         const GridSpec& grid) {
    if (prior.b.size() != 1) throw std::invalid_argument("quadrature oracle supports d = 1 only");
    auto [anchor_pos, anchor_neg] = meta.anchor_indices(v);
    const std::size_t n = v.n_legislators(), m = v.n_motions();
    std::vector<std::size_t> free_rows;
    for (std::size_t i = 0; i < n; ++i)
        if (i != anchor_pos && i != anchor_neg) free_rows.push_back(i);
    if (free_rows.size() > 2)
        throw std::invalid_argument("quadrature refused: too many free ideal points");

    const int P = grid.points;
    std::vector<double> axis(P);
    for (int g = 0; g < P; ++g)
        axis[g] = -grid.half_width + 2.0 * grid.half_width * g / (P - 1);

    const double var_mu = prior.A0(0, 0), var_alpha = prior.A0(1, 1);
    const double mean_mu = prior.alpha0[0], mean_alpha = prior.alpha0[1];
    const double var_beta = prior.B(0, 0), mean_beta = prior.b[0];

    // beta grid combinations (1 or 2 free legislators)
    std::vector<std::vector<double>> combos;
    if (free_rows.size() == 0) {
        combos.push_back({});
    } else if (free_rows.size() == 1) {
        for (double b : axis) combos.push_back({b});
    } else {
        for (double b1 : axis)
            for (double b2 : axis) combos.push_back({b1, b2});
    }

    QuadraturePosterior out;
    out.free_rows = free_rows;
    out.beta_mean.assign(free_rows.size(), 0.0);
    out.mu_mean.assign(m, 0.0);
    out.alpha_mean.assign(m, 0.0);

    std::vector<double> combo_weight(combos.size());
    std::vector<std::vector<double>> combo_mu(combos.size()), combo_alpha(combos.size());
    double total = 0.0;
    std::vector<double> beta_full(n);
    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        beta_full[anchor_pos] = 1.0;
        beta_full[anchor_neg] = -1.0;
        for (std::size_t k = 0; k < free_rows.size(); ++k) beta_full[free_rows[k]] = combos[ci][k];

        double log_w = 0.0;
        for (std::size_t k = 0; k < free_rows.size(); ++k)
            log_w += std::log(normal_density(combos[ci][k], mean_beta, var_beta));

        combo_mu[ci].assign(m, 0.0);
        combo_alpha[ci].assign(m, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            double zj = 0.0, mu_acc = 0.0, alpha_acc = 0.0;
            for (double mu : axis) {
                for (double alpha : axis) {
                    double w = normal_density(mu, mean_mu, var_mu) *
                               normal_density(alpha, mean_alpha, var_alpha);
                    double like = 1.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        Vote vote = v.at(i, j);
                        if (vote == Vote::Missing) continue;
                        double p = oracle_prob(link, mu + alpha * beta_full[i]);
                        like *= vote == Vote::Yea ? p : 1.0 - p;
                    }
                    double contrib = w * like;
                    zj += contrib;
                    mu_acc += contrib * mu;
                    alpha_acc += contrib * alpha;
                }
            }
            log_w += std::log(zj);
            combo_mu[ci][j] = mu_acc / zj;
            combo_alpha[ci][j] = alpha_acc / zj;
        }
        combo_weight[ci] = log_w;
    }
    double max_log = *std::max_element(combo_weight.begin(), combo_weight.end());
    for (double& w : combo_weight) {
        w = std::exp(w - max_log);
        total += w;
    }
    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        double w = combo_weight[ci] / total;
        for (std::size_t k = 0; k < free_rows.size(); ++k) out.beta_mean[k] += w * combos[ci][k];
        for (std::size_t j = 0; j < m; ++j) {
            out.mu_mean[j] += w * combo_mu[ci][j];
            out.alpha_mean[j] += w * combo_alpha[ci][j];
        }
    }
    return out;
}

}  // namespace spatialvote
