// Acceptance gate: one line of output per criterion, PASS / FAIL / SKIP.
// Exit status is the number of failed criteria (capped at 1 for ctest).

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "spatialvote/analysis.hpp"
#include "spatialvote/circular.hpp"
#include "spatialvote/data.hpp"
#include "spatialvote/euclidean.hpp"
#include "spatialvote/postprocess.hpp"
#include "spatialvote/rng.hpp"
#include "spatialvote/special.hpp"
#include "spatialvote/synth.hpp"

using namespace spatialvote;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("[%2d] %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void report_skip(int id, const std::string& detail) {
    std::printf("[%2d] SKIP  %s\n", id, detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

// ---- 1: Euclidean recovery at the reduced schedule ----

void criterion_1() {
    SynthConfig cfg;
    cfg.n = 100;
    cfg.m = 150;
    cfg.geometry = Geometry::Euclidean;
    cfg.link = Link::Probit;
    cfg.blocs = {{50, 1.0, 0.3}, {50, -1.0, 0.3}};
    cfg.missing_rate = 0.10;
    cfg.seed = 42;
    auto r = generate(cfg);

    EuclideanConfig fit_cfg;
    fit_cfg.link = Link::Probit;
    fit_cfg.chains = 4;
    fit_cfg.iterations = 8000;
    fit_cfg.warmup = 2000;
    fit_cfg.keep_every = 5;
    fit_cfg.seed = 1;

    auto t0 = std::chrono::steady_clock::now();
    auto draws = fit_euclidean(r.votes, r.meta, EuclideanPrior::standard(1), fit_cfg);
    double elapsed = seconds_since(t0);

    double corr = pearson_correlation(r.truth.beta, to_std(draws.beta_posterior_mean()));
    bool pass = corr >= 0.95 && elapsed <= 300.0;
    report(1, pass,
           fmt("euclidean recovery: corr(true, posterior mean) = %.4f (>= 0.95), "
               "wall time %.0fs (<= 300s)",
               corr, elapsed));
}

// ---- 2: tiny-instance quadrature equivalence ----

void criterion_2() {
    VoteMatrix v({"A", "B", "C"}, {"V1", "V2", "V3", "V4"},
                 {Vote::Yea, Vote::Yea, Vote::Nay, Vote::Yea, Vote::Yea, Vote::Nay, Vote::Missing,
                  Vote::Yea, Vote::Nay, Vote::Nay, Vote::Yea, Vote::Nay});
    std::vector<LegislatorMeta> rows(3);
    rows[0].id = "A";
    rows[0].anchor = AnchorRole::Positive;
    rows[1].id = "B";
    rows[2].id = "C";
    rows[2].anchor = AnchorRole::Negative;
    Metadata meta(std::move(rows));

    auto prior = EuclideanPrior::standard(1);
    prior.A0 = 4.0 * Eigen::MatrixXd::Identity(2, 2);

    auto quad = quadrature_posterior(v, meta, prior, Link::Probit, {8.0, 141});

    EuclideanConfig cfg;
    cfg.link = Link::Probit;
    cfg.chains = 4;
    cfg.iterations = 30000;
    cfg.warmup = 2000;
    cfg.keep_every = 1;
    cfg.seed = 7;
    auto draws = fit_euclidean(v, meta, prior, cfg);

    double beta_mean = 0.0;
    std::vector<double> mu_mean(4, 0.0), alpha_mean(4, 0.0);
    for (const auto& d : draws.draws) {
        beta_mean += d.beta(1, 0);
        for (int j = 0; j < 4; ++j) {
            mu_mean[j] += d.mu(j);
            alpha_mean[j] += d.alpha(j, 0);
        }
    }
    double nd = static_cast<double>(draws.draws.size());
    beta_mean /= nd;
    double worst = std::fabs(beta_mean - quad.beta_mean[0]);
    for (int j = 0; j < 4; ++j) {
        worst = std::max(worst, std::fabs(mu_mean[j] / nd - quad.mu_mean[j]));
        worst = std::max(worst, std::fabs(alpha_mean[j] / nd - quad.alpha_mean[j]));
    }
    report(2, worst < 0.05,
           fmt("tiny-instance oracle: max |MCMC - quadrature| = %.4f over 9 free "
               "parameters (< 0.05)",
               worst));
}

// ---- 3 & 7 (circular half): circular recovery and HMC health ----

double g_circular_acceptance = -1.0;

void criterion_3() {
    SynthConfig cfg;
    cfg.n = 80;
    cfg.m = 120;
    cfg.geometry = Geometry::Circular;
    cfg.blocs = {{40, 1.0, 0.3}, {40, -1.0, 0.3}};
    cfg.kappa_shape = 1.0;
    cfg.kappa_rate = 0.5;
    cfg.seed = 99;
    auto r = generate(cfg);

    CircularConfig fit_cfg;
    fit_cfg.iterations = 15000;
    fit_cfg.burnin = 5000;
    fit_cfg.seed = 3;
    auto t0 = std::chrono::steady_clock::now();
    auto draws = fit_circular(r.votes, r.meta, fit_cfg);
    double elapsed = seconds_since(t0);
    g_circular_acceptance = draws.acceptance_rate[0];

    auto [pos, neg] = r.meta.anchor_indices(r.votes);
    auto aligned = align_and_project(draws.beta_draw_matrix(), pos, neg);
    auto means = circular_mean_by_column(aligned.angles);
    double corr = std::fabs(circular_correlation(r.truth.beta, means));
    report(3, corr >= 0.9,
           fmt("circular recovery: |circular corr(true, mean direction)| = %.4f "
               "(>= 0.9), wall time %.0fs",
               corr, elapsed));
}

// ---- 4: near-Euclidean limiting case ----

void criterion_4() {
    SynthConfig cfg;
    cfg.n = 40;
    cfg.m = 60;
    cfg.geometry = Geometry::Circular;
    cfg.blocs = {{20, 0.4, 0.1}, {20, -0.4, 0.1}};
    cfg.kappa_shape = 8.0;
    cfg.kappa_rate = 1.0;
    cfg.seed = 11;
    auto r = generate(cfg);

    EuclideanConfig ecfg;
    ecfg.link = Link::Probit;
    ecfg.chains = 2;
    ecfg.iterations = 3000;
    ecfg.warmup = 1000;
    ecfg.keep_every = 2;
    ecfg.seed = 5;
    auto euclid = fit_euclidean(r.votes, r.meta, EuclideanPrior::standard(1), ecfg);

    CircularConfig ccfg;
    ccfg.iterations = 5000;
    ccfg.burnin = 1500;
    ccfg.seed = 5;
    auto circ = fit_circular(r.votes, r.meta, ccfg);

    // Reflection puts ref2 on the positive tangent side, so the positive
    // anchor goes in as ref2 to give both fits the same orientation.
    auto [pos, neg] = r.meta.anchor_indices(r.votes);
    auto aligned = align_and_project(circ.beta_draw_matrix(), neg, pos);

    std::vector<double> tangent_mean(cfg.n, 0.0), valid_fraction(cfg.n, 0.0);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        double sum = 0.0, count = 0.0;
        for (std::size_t t = 0; t < aligned.tangent.size(); ++t) {
            if (!aligned.valid[t][i]) continue;
            sum += aligned.tangent[t][i];
            count += 1.0;
        }
        tangent_mean[i] = count > 0 ? sum / count : std::nan("");
        valid_fraction[i] = count / static_cast<double>(aligned.tangent.size());
    }
    auto cmp = compare_models(to_std(euclid.beta_posterior_mean()), tangent_mean, valid_fraction,
                              r.votes.legislator_ids());
    report(4, cmp.correlation >= 0.8,
           fmt("euclidean limiting case: corr(euclidean means, tangent means) = %.4f "
               "(>= 0.8) over %zu of %zu legislators",
               cmp.correlation, cmp.compared_ids.size(), cfg.n));
}

// ---- 5: link-function correctness ----

void criterion_5() {
    // Normalization via the substitution u = (1 + sin s) / 2, which removes
    // the endpoint singularities of the density when kappa < 1: the
    // transformed integrand is proportional to cos(s)^(2 kappa - 1), smooth
    // on the open interval. Composite Gauss-Legendre never evaluates the
    // endpoints themselves, where u rounds to exactly 0 or 1 in floating
    // point and the finite limit of density times Jacobian is lost.
    auto normalization = [](double kappa) {
        static const double node[4] = {-0.8611363115940526, -0.3399810435848563,
                                       0.3399810435848563, 0.8611363115940526};
        static const double weight[4] = {0.3478548451374538, 0.6521451548625461,
                                         0.6521451548625461, 0.3478548451374538};
        const int panels = 2000;
        const double a = -kPi / 2.0, h = kPi / panels;
        double sum = 0.0;
        for (int k = 0; k < panels; ++k) {
            double mid = a + (k + 0.5) * h;
            for (int q = 0; q < 4; ++q) {
                double s = mid + 0.5 * h * node[q];
                double u = 0.5 * (1.0 + std::sin(s));
                double z = (2.0 * u - 1.0) * kPi * kPi;
                double jac = kPi * kPi * std::cos(s);
                sum += weight[q] * link_density(z, kappa) * jac;
            }
        }
        return sum * 0.5 * h;
    };

    double worst_norm = 0.0, worst_half = 0.0;
    for (double kappa : {0.5, 1.0, 2.0, 10.0}) {
        worst_norm = std::max(worst_norm, std::fabs(normalization(kappa) - 1.0));
        worst_half = std::max(worst_half, std::fabs(link_cdf(0.0, kappa) - 0.5));
    }

    bool monotone = true;
    for (double kappa : {0.5, 1.0, 2.0, 10.0}) {
        double prev = link_cdf(-kPi * kPi, kappa);
        for (int k = 1; k < 10000; ++k) {
            double z = -kPi * kPi + 2.0 * kPi * kPi * k / 9999.0;
            double g = link_cdf(z, kappa);
            if (g < prev) monotone = false;
            prev = g;
        }
    }
    bool pass = worst_norm < 1e-8 && worst_half < 1e-12 && monotone;
    report(5, pass,
           fmt("link function: max |integral g - 1| = %.2e (< 1e-8), "
               "max |G(0) - 0.5| = %.2e (< 1e-12), CDF monotone on 1e4 grid: %s",
               worst_norm, worst_half, monotone ? "yes" : "no"));
}

// ---- 6: gradient checks ----

void criterion_6() {
    // Euclidean: a small synthetic instance, random points near the prior mode.
    SynthConfig scfg;
    scfg.n = 10;
    scfg.m = 8;
    scfg.blocs = {{5, 0.8, 0.3}, {5, -0.8, 0.3}};
    scfg.missing_rate = 0.05;
    scfg.seed = 77;
    auto r = generate(scfg);
    auto mask = complete_case_filter(r.votes);
    auto [pos, neg] = r.meta.anchor_indices(r.votes);

    Rng rng(2024);
    double worst_euclid = 0.0;
    for (Link link : {Link::Probit, Link::Logit}) {
        EuclideanModel model(r.votes, mask, EuclideanPrior::standard(1), link, pos, neg);
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<double> theta(model.dim());
            for (double& t : theta) t = 0.6 * rng.normal();
            auto grad = model.gradient(theta);
            double diff2 = 0.0, ref2 = 0.0;
            const double h = 1e-5;
            for (std::size_t k = 0; k < theta.size(); ++k) {
                auto shifted = theta;
                shifted[k] = theta[k] + h;
                double up = model.log_posterior(shifted);
                shifted[k] = theta[k] - h;
                double down = model.log_posterior(shifted);
                double fd = (up - down) / (2.0 * h);
                diff2 += (grad[k] - fd) * (grad[k] - fd);
                ref2 += fd * fd;
            }
            worst_euclid = std::max(worst_euclid, std::sqrt(diff2 / ref2));
        }
    }

    // Circular: small instance with imputed cells active.
    SynthConfig ccfg;
    ccfg.n = 6;
    ccfg.m = 5;
    ccfg.geometry = Geometry::Circular;
    ccfg.blocs = {{3, 0.8, 0.3}, {3, -0.8, 0.3}};
    ccfg.kappa_shape = 4.0;
    ccfg.kappa_rate = 2.0;
    ccfg.missing_rate = 0.1;
    ccfg.seed = 78;
    auto rc = generate(ccfg);
    auto cmask = complete_case_filter(rc.votes);
    CircularModel cmodel(rc.votes, cmask, CircularPriorConfig{}, true);
    std::vector<std::uint8_t> imputed(cmodel.missing_cells().size());
    for (auto& cell : imputed) cell = rng.uniform() < 0.5 ? 1 : 0;

    double worst_circ = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> theta(cmodel.dim());
        for (std::size_t k = 0; k < theta.size(); ++k)
            theta[k] = cmodel.circular_mask()[k] ? rng.uniform(-2.5, 2.5) : 0.4 * rng.normal();
        auto grad = cmodel.gradient(theta, imputed);
        double diff2 = 0.0, ref2 = 0.0;
        const double h = 1e-5;
        for (std::size_t k = 0; k < theta.size(); ++k) {
            auto shifted = theta;
            shifted[k] = theta[k] + h;
            double up = cmodel.log_posterior(shifted, imputed);
            shifted[k] = theta[k] - h;
            double down = cmodel.log_posterior(shifted, imputed);
            double fd = (up - down) / (2.0 * h);
            diff2 += (grad[k] - fd) * (grad[k] - fd);
            ref2 += fd * fd;
        }
        worst_circ = std::max(worst_circ, std::sqrt(diff2 / ref2));
    }
    bool pass = worst_euclid < 1e-5 && worst_circ < 1e-5;
    report(6, pass,
           fmt("gradients vs central differences: euclidean rel err %.2e, "
               "circular rel err %.2e (both < 1e-5, 20 points each)",
               worst_euclid, worst_circ));
}

// ---- 7: HMC acceptance-rate health ----

void criterion_7() {
    SynthConfig cfg;
    cfg.n = 40;
    cfg.m = 60;
    cfg.blocs = {{20, 1.0, 0.3}, {20, -1.0, 0.3}};
    cfg.link = Link::Logit;
    cfg.seed = 55;
    auto r = generate(cfg);

    EuclideanConfig ecfg;
    ecfg.link = Link::Logit;
    ecfg.chains = 2;
    ecfg.iterations = 3000;
    ecfg.warmup = 1200;
    ecfg.keep_every = 2;
    ecfg.n_leapfrog = 12;
    ecfg.seed = 8;
    auto draws = fit_euclidean(r.votes, r.meta, EuclideanPrior::standard(1), ecfg);

    double emin = 1.0, emax = 0.0;
    for (double a : draws.acceptance_rate) {
        emin = std::min(emin, a);
        emax = std::max(emax, a);
    }
    bool euclid_ok = emin >= 0.60 && emax <= 0.90;
    bool circ_ok = g_circular_acceptance >= 0.60 && g_circular_acceptance <= 0.90;
    report(7, euclid_ok && circ_ok,
           fmt("HMC acceptance in [0.60, 0.90]: euclidean logit chains [%.3f, %.3f], "
               "circular %.3f",
               emin, emax, g_circular_acceptance));
}

// ---- 8: regression and AUC oracles ----

double nll(const std::vector<double>& x, const std::vector<std::uint8_t>& y, double b0, double b1) {
    double total = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double eta = b0 + b1 * x[k];
        total += std::log1p(std::exp(-std::fabs(eta))) + (y[k] ? std::max(-eta, 0.0)
                                                               : std::max(eta, 0.0));
    }
    return total;
}

void criterion_8() {
    // Fixed dataset; the reference optimum comes from golden-section cyclic
    // coordinate descent on an independently written likelihood.
    std::vector<double> x = {-1.2, -0.7, -0.3, 0.1, 0.4, 0.9, 1.3, 1.8};
    std::vector<std::uint8_t> y = {0, 0, 1, 0, 1, 0, 1, 1};

    double b0 = 0.0, b1 = 0.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int sweep = 0; sweep < 400; ++sweep) {
        for (int coord = 0; coord < 2; ++coord) {
            double lo = (coord == 0 ? b0 : b1) - 4.0, hi = (coord == 0 ? b0 : b1) + 4.0;
            auto eval = [&](double v) {
                return coord == 0 ? nll(x, y, v, b1) : nll(x, y, b0, v);
            };
            double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
            while (hi - lo > 1e-13) {
                if (eval(c) < eval(d))
                    hi = d;
                else
                    lo = c;
                c = hi - gr * (hi - lo);
                d = lo + gr * (hi - lo);
            }
            (coord == 0 ? b0 : b1) = 0.5 * (lo + hi);
        }
    }
    auto fit = fit_logistic(x, y);
    double coef_err = std::max(std::fabs(fit.intercept - b0), std::fabs(fit.slope - b1));

    // AUC against the exhaustive pair count, ties included.
    Rng rng(9001);
    int auc_mismatch = 0;
    for (int inst = 0; inst < 100; ++inst) {
        std::size_t size = 10 + static_cast<std::size_t>(rng.uniform() * 50);
        std::vector<double> scores(size);
        std::vector<std::uint8_t> labels(size);
        bool has_pos = false, has_neg = false;
        for (std::size_t k = 0; k < size; ++k) {
            scores[k] = std::round(rng.normal() * 4.0) / 4.0;  // quantized: forces ties
            labels[k] = rng.uniform() < 0.5 ? 1 : 0;
            (labels[k] ? has_pos : has_neg) = true;
        }
        if (!has_pos) labels[0] = 1;
        if (!has_neg) labels[1] = 0;
        double pairs = 0.0, wins = 0.0;
        for (std::size_t a = 0; a < size; ++a) {
            if (!labels[a]) continue;
            for (std::size_t b = 0; b < size; ++b) {
                if (labels[b]) continue;
                pairs += 1.0;
                if (scores[a] > scores[b])
                    wins += 1.0;
                else if (scores[a] == scores[b])
                    wins += 0.5;
            }
        }
        if (auc(scores, labels) != wins / pairs) ++auc_mismatch;
    }

    // Ensemble quantile ordering on random draws.
    std::vector<std::vector<double>> draws(60, std::vector<double>(12));
    std::vector<std::uint8_t> flags = {0, 1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0};
    for (auto& row : draws)
        for (std::size_t i = 0; i < row.size(); ++i)
            row[i] = (flags[i] ? 0.8 : -0.8) + 0.5 * rng.normal();
    auto ens = ensemble_regression(draws, flags, std::vector<std::uint8_t>(12, 0));
    bool monotone = true;
    for (const EnsembleStat* s : {&ens.intercept, &ens.slope, &ens.auc_stat})
        monotone = monotone && s->q005 <= s->q025 && s->q025 <= s->q975 && s->q975 <= s->q995;

    bool pass = coef_err < 1e-6 && auc_mismatch == 0 && monotone;
    report(8, pass,
           fmt("regression oracles: IRLS vs coordinate descent %.2e (< 1e-6), "
               "AUC exact on %d/100 instances, ensemble quantiles monotone: %s",
               coef_err, 100 - auc_mismatch, monotone ? "yes" : "no"));
}

// ---- 9: alignment identities ----

void criterion_9() {
    Rng rng(31415);
    std::vector<std::vector<double>> raw(200, std::vector<double>(15));
    for (auto& draw : raw)
        for (double& a : draw) a = rng.uniform(-kPi, kPi);
    const std::size_t ref1 = 3, ref2 = 9;
    auto aligned = align_and_project(raw, ref1, ref2);

    bool ref1_pinned = true, distances_ok = true, involution_ok = true;
    for (std::size_t t = 0; t < raw.size(); ++t) {
        if (aligned.angles[t][ref1] != kPi / 2.0) ref1_pinned = false;
        for (std::size_t i = 0; i < 15; ++i)
            for (std::size_t k = i + 1; k < 15; ++k) {
                double before = geodesic_distance(raw[t][i], raw[t][k]);
                double after = geodesic_distance(aligned.angles[t][i], aligned.angles[t][k]);
                if (std::fabs(before - after) > 1e-10) distances_ok = false;
            }
        for (std::size_t i = 0; i < 15; ++i) {
            double theta = aligned.angles[t][i];
            double twice = kPi - (kPi - theta);  // reflect about the pi/2 axis, twice
            double delta = std::remainder(twice - theta, 2.0 * kPi);
            if (std::fabs(delta) > 1e-12) involution_ok = false;
        }
    }
    // Reflection as implemented: apply it twice through the library and
    // require the original angles back.
    auto once = align_reflection(aligned.angles, ref1, ref2);
    std::vector<std::vector<double>> forced = once;
    for (auto& draw : forced)
        for (double& a : draw) a = std::remainder(kPi - a, 2.0 * kPi);  // put ref2 negative
    std::size_t reflections = 0;
    auto back = align_reflection(forced, ref1, ref2, &reflections);
    for (std::size_t t = 0; t < once.size(); ++t)
        for (std::size_t i = 0; i < 15; ++i)
            if (std::fabs(std::remainder(back[t][i] - once[t][i], 2.0 * kPi)) > 1e-12)
                involution_ok = false;

    bool pass = ref1_pinned && distances_ok && involution_ok;
    report(9, pass,
           fmt("alignment identities: ref1 at pi/2 in all draws: %s, geodesic "
               "distances preserved to 1e-10: %s, reflection involutive: %s",
               ref1_pinned ? "yes" : "no", distances_ok ? "yes" : "no",
               involution_ok ? "yes" : "no"));
}

// ---- 11: mask-only vs imputation at 20% missingness ----

void criterion_11() {
    SynthConfig cfg;
    cfg.n = 30;
    cfg.m = 40;
    cfg.geometry = Geometry::Circular;
    cfg.blocs = {{15, 0.7, 0.25}, {15, -0.7, 0.25}};
    cfg.kappa_shape = 6.0;
    cfg.kappa_rate = 1.5;
    cfg.missing_rate = 0.20;
    cfg.seed = 2025;
    auto r = generate(cfg);

    CircularConfig base;
    base.iterations = 5000;
    base.burnin = 1500;
    base.seed = 6;

    CircularConfig masked = base;
    masked.impute = false;
    auto with_impute = fit_circular(r.votes, r.meta, base);
    auto mask_only = fit_circular(r.votes, r.meta, masked);

    auto [pos, neg] = r.meta.anchor_indices(r.votes);
    auto mean_a = circular_mean_by_column(
        align_and_project(with_impute.beta_draw_matrix(), pos, neg).angles);
    auto mean_b =
        circular_mean_by_column(align_and_project(mask_only.beta_draw_matrix(), pos, neg).angles);
    double corr = circular_correlation(mean_a, mean_b);
    report(11, corr >= 0.95,
           fmt("missingness robustness: circular corr(imputation means, mask-only "
               "means) = %.4f (>= 0.95) at 20%% missing",
               corr));
}

// ---- 12: determinism ----

void criterion_12() {
    SynthConfig cfg;
    cfg.n = 12;
    cfg.m = 16;
    cfg.blocs = {{6, 1.0, 0.3}, {6, -1.0, 0.3}};
    cfg.missing_rate = 0.05;
    cfg.seed = 13;
    auto r = generate(cfg);

    EuclideanConfig ecfg;
    ecfg.link = Link::Logit;
    ecfg.chains = 2;
    ecfg.iterations = 600;
    ecfg.warmup = 200;
    ecfg.keep_every = 1;
    ecfg.seed = 21;
    auto e1 = fit_euclidean(r.votes, r.meta, EuclideanPrior::standard(1), ecfg);
    auto e2 = fit_euclidean(r.votes, r.meta, EuclideanPrior::standard(1), ecfg);
    bool euclid_same = e1.draws.size() == e2.draws.size();
    for (std::size_t t = 0; euclid_same && t < e1.draws.size(); ++t)
        euclid_same = e1.draws[t].mu == e2.draws[t].mu &&
                      e1.draws[t].alpha == e2.draws[t].alpha &&
                      e1.draws[t].beta == e2.draws[t].beta;

    cfg.geometry = Geometry::Circular;
    cfg.blocs = {{6, 0.6, 0.2}, {6, -0.6, 0.2}};
    cfg.kappa_shape = 6.0;
    cfg.kappa_rate = 2.0;
    auto rc = generate(cfg);
    CircularConfig ccfg;
    ccfg.iterations = 600;
    ccfg.burnin = 200;
    ccfg.seed = 22;
    auto c1 = fit_circular(rc.votes, rc.meta, ccfg);
    auto c2 = fit_circular(rc.votes, rc.meta, ccfg);
    bool circ_same = c1.draws.size() == c2.draws.size();
    for (std::size_t t = 0; circ_same && t < c1.draws.size(); ++t)
        circ_same = c1.draws[t].params.beta == c2.draws[t].params.beta &&
                    c1.draws[t].params.psi == c2.draws[t].params.psi &&
                    c1.draws[t].params.zeta == c2.draws[t].params.zeta &&
                    c1.draws[t].params.kappa == c2.draws[t].params.kappa &&
                    c1.draws[t].imputed == c2.draws[t].imputed;

    report(12, euclid_same && circ_same,
           fmt("determinism: repeated fits bit-identical, euclidean: %s, circular: %s",
               euclid_same ? "yes" : "no", circ_same ? "yes" : "no"));
}

}  // namespace

int main() {
    criterion_5();
    criterion_6();
    criterion_8();
    criterion_9();
    criterion_12();
    criterion_2();
    criterion_4();
    criterion_11();
    criterion_1();
    criterion_3();
    criterion_7();  // needs the circular acceptance rate recorded by criterion 3
    report_skip(10, "real-dataset reproduction: 147x136 roll-call matrix not provided");

    std::printf("%s: %d of 11 evaluated criteria failed, 1 skipped\n",
                g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", g_failures);
    return g_failures == 0 ? 0 : 1;
}
