#include "spatialvote/circular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "spatialvote/leapfrog.hpp"
#include "spatialvote/special.hpp"

namespace spatialvote {

namespace {

constexpr double kProbEps = 1e-12;
constexpr double kBoundaryEps = 0.5e-12;  // u clamp, i.e. |z| <= pi^2 (1 - 1e-12)

double clamp_prob(double p) { return std::clamp(p, kProbEps, 1.0 - kProbEps); }

double to_unit(double z) {
    double u = (z + kPiSq) / (2.0 * kPiSq);
    return std::clamp(u, kBoundaryEps, 1.0 - kBoundaryEps);
}

}  // namespace

double geodesic_distance(double a, double b) { return std::fabs(wrap_angle(a - b)); }

double z_statistic(double beta_i, double psi_j, double zeta_j) {
    double dz = wrap_angle(zeta_j - beta_i);
    double dp = wrap_angle(psi_j - beta_i);
    return dz * dz - dp * dp;
}

double link_logpdf(double z, double kappa) {
    if (kappa <= 0.0) throw std::domain_error("link density: kappa must be > 0");
    if (std::fabs(z) > kPiSq * (1.0 + 1e-8)) throw std::domain_error("link density: |z| > pi^2");
    double u = to_unit(z);
    return -std::log(2.0 * kPiSq) + std::lgamma(2.0 * kappa) - 2.0 * std::lgamma(kappa) +
           (kappa - 1.0) * (std::log(u) + std::log1p(-u));
}

double link_cdf(double z, double kappa) {
    if (kappa <= 0.0) throw std::domain_error("link cdf: kappa must be > 0");
    if (std::fabs(z) > kPiSq * (1.0 + 1e-8)) throw std::domain_error("link cdf: |z| > pi^2");
    if (z == 0.0) return 0.5;  // exact by symmetry
    if (z >= kPiSq) return 1.0;
    if (z <= -kPiSq) return 0.0;
    double u = (z + kPiSq) / (2.0 * kPiSq);
    return ibeta_reg(kappa, kappa, u);
}

double link_cdf_dkappa(double z, double kappa) {
    double h = kappa * 1e-4;
    return (link_cdf(z, kappa + h) - link_cdf(z, kappa - h)) / (2.0 * h);
}

CircularModel::CircularModel(const VoteMatrix& v, const ObservationMask& mask,
                             const CircularPriorConfig& prior, bool use_imputation)
    : v_(v),
      mask_(mask),
      prior_(prior),
      use_imputation_(use_imputation),
      n_(v.n_legislators()),
      m_(v.n_motions()) {
    missing_index_.assign(n_ * m_, -1);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < m_; ++j)
            if (!mask_.at(i, j)) {
                missing_index_[i * m_ + j] = static_cast<std::int32_t>(missing_cells_.size());
                missing_cells_.emplace_back(i, j);
            }
    circular_.assign(dim(), 0);
    for (std::size_t k = 0; k < n_ + 2 * m_; ++k) circular_[k] = 1;
}

std::vector<double> CircularModel::pack(const CircularParams& p) const {
    std::vector<double> theta;
    theta.reserve(dim());
    theta.insert(theta.end(), p.beta.begin(), p.beta.end());
    theta.insert(theta.end(), p.psi.begin(), p.psi.end());
    theta.insert(theta.end(), p.zeta.begin(), p.zeta.end());
    for (double k : p.kappa) theta.push_back(std::log(k));
    theta.push_back(std::log(p.omega_beta));
    theta.push_back(std::log(p.beta_kappa));
    return theta;
}

CircularParams CircularModel::unpack(const std::vector<double>& theta) const {
    CircularParams p;
    auto it = theta.begin();
    p.beta.assign(it, it + n_);
    it += n_;
    p.psi.assign(it, it + m_);
    it += m_;
    p.zeta.assign(it, it + m_);
    it += m_;
    p.kappa.resize(m_);
    for (std::size_t j = 0; j < m_; ++j) p.kappa[j] = std::exp(*it++);
    p.omega_beta = std::exp(*it++);
    p.beta_kappa = std::exp(*it++);
    return p;
}

int CircularModel::cell_vote(std::size_t i, std::size_t j, const std::vector<std::uint8_t>& imputed,
                             bool& include) const {
    if (mask_.at(i, j)) {
        include = true;
        return v_.at(i, j) == Vote::Yea ? 1 : 0;
    }
    if (use_imputation_ && !imputed.empty()) {
        include = true;
        return imputed[missing_index_[i * m_ + j]] ? 1 : 0;
    }
    include = false;
    return 0;
}

double CircularModel::log_posterior(const std::vector<double>& theta,
                                    const std::vector<std::uint8_t>& imputed) const {
    const double* beta = theta.data();
    const double* psi = theta.data() + n_;
    const double* zeta = theta.data() + n_ + m_;
    const double* log_kappa = theta.data() + n_ + 2 * m_;
    const double log_omega = theta[n_ + 3 * m_];
    const double log_bk = theta[n_ + 3 * m_ + 1];
    const double omega = std::exp(log_omega);
    const double bk = std::exp(log_bk);

    // Leapfrog trajectories can push the log-scale coordinates past the
    // range of exp; report an impossible state so the proposal is rejected
    // rather than throwing from the link evaluation.
    if (!std::isfinite(omega) || !std::isfinite(bk))
        return -std::numeric_limits<double>::infinity();

    double lp = 0.0;
    for (std::size_t j = 0; j < m_; ++j) {
        double kappa = std::exp(log_kappa[j]);
        if (kappa <= 0.0 || !std::isfinite(kappa))
            return -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_; ++i) {
            bool include;
            int y = cell_vote(i, j, imputed, include);
            if (!include) continue;
            double z = z_statistic(beta[i], psi[j], zeta[j]);
            double g = clamp_prob(link_cdf(z, kappa));
            lp += y ? std::log(g) : std::log1p(-g);
        }
    }
    // von Mises prior on beta (mean 0, concentration omega); psi/zeta flat.
    double cos_sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) cos_sum += std::cos(beta[i]);
    lp += omega * cos_sum - static_cast<double>(n_) * (std::log(kTwoPi) + log_bessel_i0(omega));
    // hierarchical Gamma priors, sampled on the log scale (Jacobian included)
    double kappa_sum = 0.0;
    for (std::size_t j = 0; j < m_; ++j) {
        kappa_sum += std::exp(log_kappa[j]);
        lp += log_bk + log_kappa[j];
    }
    lp -= bk * kappa_sum;
    const double r_omega = prior_.effective_omega_rate();
    const double r_bk = prior_.effective_beta_kappa_rate();
    lp += std::log(r_omega) - r_omega * omega + log_omega;
    lp += std::log(r_bk) - r_bk * bk + log_bk;
    return lp;
}

std::vector<double> CircularModel::gradient(const std::vector<double>& theta,
                                            const std::vector<std::uint8_t>& imputed) const {
    const double* beta = theta.data();
    const double* psi = theta.data() + n_;
    const double* zeta = theta.data() + n_ + m_;
    const double* log_kappa = theta.data() + n_ + 2 * m_;
    const double log_omega = theta[n_ + 3 * m_];
    const double log_bk = theta[n_ + 3 * m_ + 1];
    const double omega = std::exp(log_omega);
    const double bk = std::exp(log_bk);

    std::vector<double> grad(dim(), 0.0);
    double* g_beta = grad.data();
    double* g_psi = grad.data() + n_;
    double* g_zeta = grad.data() + n_ + m_;
    double* g_logk = grad.data() + n_ + 2 * m_;

    bool overflow = !std::isfinite(omega) || !std::isfinite(bk);
    for (std::size_t j = 0; j < m_ && !overflow; ++j) {
        double kappa = std::exp(log_kappa[j]);
        if (kappa <= 0.0 || !std::isfinite(kappa)) overflow = true;
    }
    if (overflow) {
        // a non-finite gradient makes the integrator bail out and reject
        std::fill(grad.begin(), grad.end(), std::numeric_limits<double>::quiet_NaN());
        return grad;
    }

    double kappa_sum = 0.0;
    for (std::size_t j = 0; j < m_; ++j) {
        const double kappa = std::exp(log_kappa[j]);
        kappa_sum += kappa;
        const double log_norm = std::lgamma(2.0 * kappa) - 2.0 * std::lgamma(kappa) -
                                std::log(2.0 * kPiSq);
        double dll_dkappa = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            bool include;
            int y = cell_vote(i, j, imputed, include);
            if (!include) continue;
            double wz = wrap_angle(zeta[j] - beta[i]);
            double wp = wrap_angle(psi[j] - beta[i]);
            double z = wz * wz - wp * wp;
            double g_cdf = clamp_prob(link_cdf(z, kappa));
            double u = to_unit(z);
            double pdf = std::exp(log_norm + (kappa - 1.0) * (std::log(u) + std::log1p(-u)));
            double c = y ? 1.0 / g_cdf : -1.0 / (1.0 - g_cdf);
            double dll_dz = c * pdf;
            g_beta[i] += dll_dz * (-2.0 * wz + 2.0 * wp);
            g_psi[j] += dll_dz * (-2.0 * wp);
            g_zeta[j] += dll_dz * (2.0 * wz);
            dll_dkappa += c * link_cdf_dkappa(z, kappa);
        }
        g_logk[j] = kappa * dll_dkappa + 1.0 - bk * kappa;
    }
    double cos_sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        g_beta[i] -= omega * std::sin(beta[i]);
        cos_sum += std::cos(beta[i]);
    }
    const double r_omega = prior_.effective_omega_rate();
    const double r_bk = prior_.effective_beta_kappa_rate();
    grad[n_ + 3 * m_] =
        omega * (cos_sum - static_cast<double>(n_) * bessel_i1_over_i0(omega) - r_omega) + 1.0;
    grad[n_ + 3 * m_ + 1] = static_cast<double>(m_) - bk * kappa_sum - r_bk * bk + 1.0;
    return grad;
}

std::vector<std::uint8_t> CircularModel::impute_missing(Rng& rng,
                                                        const CircularParams& params) const {
    std::vector<std::uint8_t> out(missing_cells_.size());
    for (std::size_t k = 0; k < missing_cells_.size(); ++k) {
        auto [i, j] = missing_cells_[k];
        double z = z_statistic(params.beta[i], params.psi[j], params.zeta[j]);
        double p = link_cdf(z, params.kappa[j]);
        out[k] = rng.uniform() < p ? 1 : 0;
    }
    return out;
}

bool hmc_step_circular(Rng& rng, const CircularModel& model, std::vector<double>& theta,
                       double& log_post, const std::vector<std::uint8_t>& imputed,
                       double step_size, int n_leapfrog, double& accept_prob) {
    const auto& circ = model.circular_mask();
    std::vector<double> p(theta.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        p[k] = circ[k] ? rng.von_mises(0.0, 1.0) : rng.normal();

    double h0 = -log_post + kinetic_energy(p, circ, true);
    std::vector<double> q = theta;
    GradFn potential_grad = [&](const std::vector<double>& x) {
        auto g = model.gradient(x, imputed);
        for (double& v : g) v = -v;
        return g;
    };
    accept_prob = 0.0;
    if (!leapfrog(q, p, potential_grad, step_size, n_leapfrog, /*wrap=*/true, circ,
                  /*von_mises_momentum=*/true))
        return false;
    double lp_new = model.log_posterior(q, imputed);
    double h1 = -lp_new + kinetic_energy(p, circ, true);
    if (std::isfinite(h1)) accept_prob = std::min(1.0, std::exp(h0 - h1));
    if (rng.uniform() < accept_prob) {
        theta = std::move(q);
        log_post = lp_new;
        return true;
    }
    return false;
}

namespace {

CircularParams initial_params(const VoteMatrix& v, const Metadata& meta) {
    const std::size_t n = v.n_legislators(), m = v.n_motions();
    CircularParams p;
    p.beta.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        Bloc b = meta.by_id(v.legislator_ids()[i]).bloc;
        if (b == Bloc::Coalition) p.beta[i] = 1.0;
        if (b == Bloc::Opposition) p.beta[i] = -1.0;
    }
    p.psi.assign(m, 0.0);
    p.zeta.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double ys = 0.0, yc = 0.0, ns = 0.0, nc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (v.at(i, j) == Vote::Yea) {
                ys += std::sin(p.beta[i]);
                yc += std::cos(p.beta[i]);
            } else if (v.at(i, j) == Vote::Nay) {
                ns += std::sin(p.beta[i]);
                nc += std::cos(p.beta[i]);
            }
        }
        p.psi[j] = (ys != 0.0 || yc != 0.0) ? std::atan2(ys, yc) : 0.5;
        p.zeta[j] = (ns != 0.0 || nc != 0.0) ? std::atan2(ns, nc) : -0.5;
        if (geodesic_distance(p.psi[j], p.zeta[j]) < 0.1) p.zeta[j] = wrap_angle(p.psi[j] + 0.5);
    }
    p.kappa.assign(m, 1.0);
    p.omega_beta = 1.0;
    p.beta_kappa = 0.04;
    return p;
}

}  // namespace

std::vector<std::vector<double>> CircularDraws::beta_draw_matrix() const {
    std::vector<std::vector<double>> out;
    out.reserve(draws.size());
    for (const auto& d : draws) out.push_back(d.params.beta);
    return out;
}

CircularDraws fit_circular(const VoteMatrix& v, const Metadata& meta,
                           const CircularConfig& config) {
    meta.require_covers(v);
    ObservationMask mask = complete_case_filter(v);
    CircularModel model(v, mask, config.prior, config.impute);

    CircularDraws result;
    result.config = config;
    result.missing_cells = model.missing_cells();
    Rng master(config.seed);

    std::vector<std::vector<std::vector<double>>> beta_by_chain;
    for (int c = 0; c < config.chains; ++c) {
        Rng rng = master.split(static_cast<std::uint64_t>(c));
        std::vector<double> theta = model.pack(initial_params(v, meta));
        std::vector<std::uint8_t> imputed;
        if (config.impute) imputed = model.impute_missing(rng, model.unpack(theta));
        double lp = model.log_posterior(theta, imputed);

        StepSizeAdapter adapter(config.step_size_init, config.target_accept);
        double step = config.step_size_init;
        std::size_t proposals = 0, accepted = 0;
        std::vector<std::vector<double>> chain_beta;

        for (int t = 0; t < config.iterations; ++t) {
            if (config.impute) {
                imputed = model.impute_missing(rng, model.unpack(theta));
                lp = model.log_posterior(theta, imputed);
            }
            double accept_prob = 0.0;
            bool acc = hmc_step_circular(rng, model, theta, lp, imputed, step, config.n_leapfrog,
                                         accept_prob);
            if (t < config.burnin) {
                step = adapter.update(accept_prob);
                if (t == config.burnin - 1) step = adapter.final_step();
            } else {
                ++proposals;
                if (acc) ++accepted;
                CircularDraw d;
                d.params = model.unpack(theta);
                if (config.impute) d.imputed = imputed;
                chain_beta.push_back(d.params.beta);
                result.draws.push_back(std::move(d));
                result.chain_of_draw.push_back(c);
            }
        }
        result.acceptance_rate.push_back(
            proposals ? static_cast<double>(accepted) / proposals : 0.0);
        result.step_size.push_back(step);
        beta_by_chain.push_back(std::move(chain_beta));
    }

    bool enough = true;
    for (const auto& cb : beta_by_chain)
        if ((config.chains > 1 && cb.size() < 100) || (config.chains == 1 && cb.size() < 200))
            enough = false;
    if (enough) {
        std::vector<std::uint8_t> circ(v.n_legislators(), 1);
        result.diag = diagnostics(beta_by_chain, circ);
        result.diag.acceptance_rate =
            std::accumulate(result.acceptance_rate.begin(), result.acceptance_rate.end(), 0.0) /
            config.chains;
        result.convergence_warning = result.diag.fraction_rhat_above(1.1) > 0.05;
    }
    return result;
}

}  // namespace spatialvote
