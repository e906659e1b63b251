#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spatialvote {

struct LogisticFit {
    double intercept = 0.0;
    double slope = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Maximum-likelihood simple logistic regression via IRLS; converges when
/// the largest score component drops below 1e-10 or after 50 iterations
/// (perfect separation is reported as converged=false with the coefficients
/// at the iteration cap).
LogisticFit fit_logistic(const std::vector<double>& x, const std::vector<std::uint8_t>& y);

/// Mann–Whitney AUC: fraction of (positive, negative) pairs with
/// score_pos > score_neg, ties counted 1/2.
double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& y);

struct EnsembleStat {
    double mean = 0.0;
    double q005 = 0.0, q025 = 0.0, q975 = 0.0, q995 = 0.0;
};

struct RegressionEnsemble {
    std::vector<double> intercepts, slopes, aucs;  // per retained draw
    EnsembleStat intercept, slope, auc_stat;
    std::size_t separation_count = 0;
    std::size_t draws_excluded = 0;  // circular draws with invalid tangent values
};

/// Per-draw logistic regression of the binary flag on ideal points, with
/// AUC computed from the fitted probabilities of the same draw.
///
/// `draws` is draws x n; `exclude` flags legislators (anchors) dropped from
/// every design matrix; `draw_valid`, when non-empty, holds per-draw
/// per-legislator validity flags (draws with any invalid value among the
/// retained legislators are skipped).
RegressionEnsemble ensemble_regression(
    const std::vector<std::vector<double>>& draws, const std::vector<std::uint8_t>& flags,
    const std::vector<std::uint8_t>& exclude,
    const std::vector<std::vector<std::uint8_t>>& draw_valid = {});

}  // namespace spatialvote
