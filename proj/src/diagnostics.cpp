#include "spatialvote/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "spatialvote/special.hpp"

namespace spatialvote {

namespace {

// Split every chain in halves (dropping a possible odd middle draw).
std::vector<std::vector<double>> split_chains(const std::vector<std::vector<double>>& chains) {
    std::vector<std::vector<double>> out;
    for (const auto& c : chains) {
        std::size_t half = c.size() / 2;
        out.emplace_back(c.begin(), c.begin() + half);
        out.emplace_back(c.begin() + half, c.begin() + 2 * half);
    }
    return out;
}

// Rank-normalize all draws jointly (average ranks, Blom offset).
std::vector<std::vector<double>> rank_normalize(const std::vector<std::vector<double>>& chains) {
    std::size_t total = 0;
    for (const auto& c : chains) total += c.size();
    struct Entry {
        double value;
        std::size_t chain, idx;
    };
    std::vector<Entry> all;
    all.reserve(total);
    for (std::size_t c = 0; c < chains.size(); ++c)
        for (std::size_t i = 0; i < chains[c].size(); ++i) all.push_back({chains[c][i], c, i});
    std::stable_sort(all.begin(), all.end(),
                     [](const Entry& a, const Entry& b) { return a.value < b.value; });
    std::vector<std::vector<double>> out(chains.size());
    for (std::size_t c = 0; c < chains.size(); ++c) out[c].resize(chains[c].size());
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].value == all[i].value) ++j;
        double avg_rank = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
        double z = normal_quantile((avg_rank - 0.375) / (static_cast<double>(total) + 0.25));
        for (std::size_t k = i; k < j; ++k) out[all[k].chain][all[k].idx] = z;
        i = j;
    }
    return out;
}

struct WB {
    double w, var_plus;
    std::size_t n;
};

WB within_between(const std::vector<std::vector<double>>& chains) {
    std::size_t m = chains.size(), n = chains[0].size();
    std::vector<double> means(m), vars(m);
    for (std::size_t c = 0; c < m; ++c) {
        double mu = std::accumulate(chains[c].begin(), chains[c].end(), 0.0) / n;
        double s2 = 0.0;
        for (double x : chains[c]) s2 += (x - mu) * (x - mu);
        means[c] = mu;
        vars[c] = s2 / (n - 1);
    }
    double w = std::accumulate(vars.begin(), vars.end(), 0.0) / m;
    double grand = std::accumulate(means.begin(), means.end(), 0.0) / m;
    double b = 0.0;
    for (double mu : means) b += (mu - grand) * (mu - grand);
    b = b * n / (m - 1);
    double var_plus = (static_cast<double>(n - 1) / n) * w + b / n;
    return {w, var_plus, n};
}

double ess_from_chains(const std::vector<std::vector<double>>& chains) {
    // Multi-chain ESS with Geyer's initial-monotone truncation.
    std::size_t m = chains.size(), n = chains[0].size();
    WB wb = within_between(chains);
    if (wb.var_plus <= 0.0) return std::numeric_limits<double>::quiet_NaN();

    std::vector<double> means(m);
    for (std::size_t c = 0; c < m; ++c)
        means[c] = std::accumulate(chains[c].begin(), chains[c].end(), 0.0) / n;

    auto acov = [&](std::size_t c, std::size_t t) {
        double s = 0.0;
        for (std::size_t i = 0; i + t < n; ++i)
            s += (chains[c][i] - means[c]) * (chains[c][i + t] - means[c]);
        return s / n;
    };

    double tau = 1.0;
    double prev_pair = std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t + 1 < n; t += 2) {
        double rho_t = 0.0, rho_t1 = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            rho_t += acov(c, t);
            rho_t1 += acov(c, t + 1);
        }
        rho_t = 1.0 - (wb.w - rho_t / m) / wb.var_plus;
        rho_t1 = 1.0 - (wb.w - rho_t1 / m) / wb.var_plus;
        double pair = rho_t + rho_t1;
        if (pair < 0.0) break;
        pair = std::min(pair, prev_pair);  // enforce monotone decrease
        prev_pair = pair;
        tau += 2.0 * pair;
        if (t > 2000) break;
    }
    return static_cast<double>(m * n) / tau;
}

ParamDiagnostics diagnose_split(const std::vector<std::vector<double>>& split) {
    ParamDiagnostics d;
    bool constant = true;
    double first = split[0][0];
    for (const auto& c : split)
        for (double x : c)
            if (x != first) {
                constant = false;
                break;
            }
    if (constant) {
        d.degenerate = true;
        d.ess = std::numeric_limits<double>::quiet_NaN();
        d.split_rhat = std::numeric_limits<double>::infinity();
        return d;
    }
    auto ranked = rank_normalize(split);
    WB wb = within_between(ranked);
    d.split_rhat = (wb.w > 0.0) ? std::sqrt(wb.var_plus / wb.w)
                                : std::numeric_limits<double>::infinity();
    d.ess = ess_from_chains(split);
    return d;
}

}  // namespace

ParamDiagnostics diagnose_parameter(const std::vector<std::vector<double>>& chains) {
    if (chains.empty()) throw std::runtime_error("diagnostics: no chains");
    for (const auto& c : chains)
        if (c.size() < 100)
            throw std::runtime_error("diagnostics unavailable: need >= 100 draws per chain");
    return diagnose_split(split_chains(chains));
}

ChainDiagnostics diagnostics(const std::vector<std::vector<std::vector<double>>>& draws,
                             const std::vector<std::uint8_t>& circular) {
    ChainDiagnostics out;
    if (draws.empty() || draws[0].empty()) throw std::runtime_error("diagnostics: no draws");
    std::size_t n_params = draws[0][0].size();
    auto extract = [&](std::size_t k, double (*f)(double)) {
        std::vector<std::vector<double>> chains(draws.size());
        for (std::size_t c = 0; c < draws.size(); ++c) {
            chains[c].reserve(draws[c].size());
            for (const auto& d : draws[c]) chains[c].push_back(f(d[k]));
        }
        return chains;
    };
    auto identity = +[](double x) { return x; };
    for (std::size_t k = 0; k < n_params; ++k) {
        bool circ = k < circular.size() && circular[k];
        if (!circ) {
            out.params.push_back(diagnose_parameter(extract(k, identity)));
        } else {
            // R-hat on raw angles is discontinuous at +-pi; use the plane embedding.
            auto dc = diagnose_parameter(extract(k, +[](double x) { return std::cos(x); }));
            auto ds = diagnose_parameter(extract(k, +[](double x) { return std::sin(x); }));
            ParamDiagnostics d;
            d.degenerate = dc.degenerate && ds.degenerate;
            d.split_rhat = std::max(dc.split_rhat, ds.split_rhat);
            d.ess = std::min(dc.ess, ds.ess);
            if (dc.degenerate != ds.degenerate) {
                d.split_rhat = dc.degenerate ? ds.split_rhat : dc.split_rhat;
                d.ess = dc.degenerate ? ds.ess : dc.ess;
                d.degenerate = false;
            }
            out.params.push_back(d);
        }
    }
    return out;
}

double ChainDiagnostics::fraction_rhat_above(double threshold) const {
    if (params.empty()) return 0.0;
    std::size_t bad = 0;
    for (const auto& p : params)
        if (!p.degenerate && p.split_rhat > threshold) ++bad;
    return static_cast<double>(bad) / params.size();
}

}  // namespace spatialvote
