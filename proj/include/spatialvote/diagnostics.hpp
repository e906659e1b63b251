#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spatialvote {

struct ParamDiagnostics {
    double ess = 0.0;
    double split_rhat = 0.0;
    bool degenerate = false;  // constant chains: ESS undefined, R-hat sentinel
};

struct ChainDiagnostics {
    std::vector<ParamDiagnostics> params;
    double acceptance_rate = 1.0;  // Gibbs samplers report 1

    /// Fraction of parameters with split R-hat above the threshold.
    double fraction_rhat_above(double threshold) const;
};

/// Split R-hat and effective sample size for one parameter. `chains` holds
/// one draw sequence per chain; a single chain is split in halves first.
/// Rank-normalization is applied before computing R-hat so the diagnostic
/// is robust to heavy tails.
ParamDiagnostics diagnose_parameter(const std::vector<std::vector<double>>& chains);

/// Per-parameter diagnostics for a draws-by-parameter layout.
/// `draws[c]` is a chain; `draws[c][t]` a draw; `draws[c][t][k]` parameter k.
/// Circular parameters (flagged) are diagnosed on their (cos, sin)
/// embedding; the worse of the two components is reported.
ChainDiagnostics diagnostics(const std::vector<std::vector<std::vector<double>>>& draws,
                             const std::vector<std::uint8_t>& circular = {});

/// Deterministic thinning: keep indices 0, k, 2k, ... of `draws`.
template <typename T>
std::vector<T> thin(const std::vector<T>& draws, std::size_t keep_every) {
    std::vector<T> out;
    if (keep_every == 0) keep_every = 1;
    out.reserve(draws.size() / keep_every + 1);
    for (std::size_t i = 0; i < draws.size(); i += keep_every) out.push_back(draws[i]);
    return out;
}

}  // namespace spatialvote
