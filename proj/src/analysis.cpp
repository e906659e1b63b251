#include "spatialvote/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spatialvote/postprocess.hpp"
#include "spatialvote/special.hpp"

namespace spatialvote {

LogisticFit fit_logistic(const std::vector<double>& x, const std::vector<std::uint8_t>& y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("fit_logistic: mismatched inputs");
    std::size_t pos = std::accumulate(y.begin(), y.end(), std::size_t{0});
    if (pos == 0 || pos == y.size())
        throw std::invalid_argument("fit_logistic: response has a single class");
    double xmin = *std::min_element(x.begin(), x.end());
    double xmax = *std::max_element(x.begin(), x.end());
    if (xmin == xmax) throw std::invalid_argument("fit_logistic: degenerate design (constant x)");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("fit_logistic: non-finite predictor");

    // perfect separation in one dimension: the class supports do not overlap
    double pos_min = xmax, pos_max = xmin, neg_min = xmax, neg_max = xmin;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (y[k]) {
            pos_min = std::min(pos_min, x[k]);
            pos_max = std::max(pos_max, x[k]);
        } else {
            neg_min = std::min(neg_min, x[k]);
            neg_max = std::max(neg_max, x[k]);
        }
    }
    const bool separated = neg_max < pos_min || pos_max < neg_min;

    constexpr int max_iter = 50;
    constexpr double tol = 1e-10;
    LogisticFit fit;
    double b0 = 0.0, b1 = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        // score and observed information for (b0, b1)
        double s0 = 0.0, s1 = 0.0, i00 = 0.0, i01 = 0.0, i11 = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            double p = logistic(b0 + b1 * x[k]);
            double r = static_cast<double>(y[k]) - p;
            double w = p * (1.0 - p);
            s0 += r;
            s1 += r * x[k];
            i00 += w;
            i01 += w * x[k];
            i11 += w * x[k] * x[k];
        }
        fit.iterations = it;
        if (std::max(std::fabs(s0), std::fabs(s1)) < tol) {
            fit.converged = true;
            break;
        }
        double det = i00 * i11 - i01 * i01;
        if (det <= 0.0 || !std::isfinite(det)) break;  // separation drove weights to zero
        b0 += (i11 * s0 - i01 * s1) / det;
        b1 += (i00 * s1 - i01 * s0) / det;
        if (!std::isfinite(b0) || !std::isfinite(b1)) break;
    }
    fit.intercept = b0;
    fit.slope = b1;
    if (separated) fit.converged = false;
    return fit;
}

double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& y) {
    if (scores.size() != y.size() || scores.empty())
        throw std::invalid_argument("auc: mismatched inputs");
    std::size_t n_pos = 0, n_neg = 0;
    for (auto v : y) (v ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("auc: both classes required");

    // rank-sum form; average ranks over ties give the 1/2 pair credit
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        double avg_rank = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
        for (std::size_t k = i; k < j; ++k)
            if (y[order[k]]) rank_sum_pos += avg_rank;
        i = j;
    }
    return (rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0) /
           (static_cast<double>(n_pos) * n_neg);
}

RegressionEnsemble ensemble_regression(const std::vector<std::vector<double>>& draws,
                                       const std::vector<std::uint8_t>& flags,
                                       const std::vector<std::uint8_t>& exclude,
                                       const std::vector<std::vector<std::uint8_t>>& draw_valid) {
    if (draws.empty()) throw std::invalid_argument("ensemble_regression: no draws");
    const std::size_t n = flags.size();
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (exclude.empty() || !exclude[i]) keep.push_back(i);

    RegressionEnsemble out;
    for (std::size_t t = 0; t < draws.size(); ++t) {
        if (!draw_valid.empty()) {
            bool ok = true;
            for (std::size_t i : keep)
                if (!draw_valid[t][i]) {
                    ok = false;
                    break;
                }
            if (!ok) {
                ++out.draws_excluded;
                continue;
            }
        }
        std::vector<double> x;
        std::vector<std::uint8_t> y;
        x.reserve(keep.size());
        y.reserve(keep.size());
        for (std::size_t i : keep) {
            x.push_back(draws[t][i]);
            y.push_back(flags[i]);
        }
        LogisticFit fit = fit_logistic(x, y);
        if (!fit.converged) ++out.separation_count;
        std::vector<double> probs(x.size());
        for (std::size_t k = 0; k < x.size(); ++k)
            probs[k] = logistic(fit.intercept + fit.slope * x[k]);
        out.intercepts.push_back(fit.intercept);
        out.slopes.push_back(fit.slope);
        out.aucs.push_back(auc(probs, y));
    }
    if (out.intercepts.empty())
        throw std::invalid_argument("ensemble_regression: every draw was excluded");

    auto stat = [](const std::vector<double>& v) {
        EnsembleStat s;
        s.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        s.q005 = percentile(v, 0.005);
        s.q025 = percentile(v, 0.025);
        s.q975 = percentile(v, 0.975);
        s.q995 = percentile(v, 0.995);
        return s;
    };
    out.intercept = stat(out.intercepts);
    out.slope = stat(out.slopes);
    out.auc_stat = stat(out.aucs);
    return out;
}

}  // namespace spatialvote
