#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spatialvote/analysis.hpp"
#include "spatialvote/circular.hpp"
#include "spatialvote/data.hpp"
#include "spatialvote/euclidean.hpp"
#include "spatialvote/postprocess.hpp"
#include "spatialvote/synth.hpp"

namespace py = pybind11;
using namespace spatialvote;

namespace {

// Votes cross the boundary as an n x m list of ints: 1 Yea, 0 Nay, -1 missing.
VoteMatrix votes_from_rows(const std::vector<std::vector<int>>& rows,
                           const std::vector<std::string>& ids) {
    if (rows.empty() || rows.size() != ids.size())
        throw std::invalid_argument("votes and ids must have the same nonzero length");
    std::size_t m = rows[0].size();
    std::vector<std::string> motions(m);
    for (std::size_t j = 0; j < m; ++j) motions[j] = "V" + std::to_string(j + 1);
    std::vector<Vote> cells;
    cells.reserve(rows.size() * m);
    for (const auto& row : rows) {
        if (row.size() != m) throw std::invalid_argument("ragged vote matrix");
        for (int c : row) {
            if (c != 0 && c != 1 && c != -1)
                throw std::invalid_argument("vote cells must be 1, 0, or -1");
            cells.push_back(c == 1 ? Vote::Yea : c == 0 ? Vote::Nay : Vote::Missing);
        }
    }
    return VoteMatrix(ids, motions, std::move(cells));
}

Metadata meta_with_anchors(const std::vector<std::string>& ids, const std::string& positive,
                           const std::string& negative) {
    std::vector<LegislatorMeta> rows(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        rows[i].id = ids[i];
        if (ids[i] == positive) rows[i].anchor = AnchorRole::Positive;
        if (ids[i] == negative) rows[i].anchor = AnchorRole::Negative;
    }
    return Metadata(std::move(rows));
}

std::vector<std::vector<int>> votes_to_rows(const VoteMatrix& v) {
    std::vector<std::vector<int>> rows(v.n_legislators(), std::vector<int>(v.n_motions()));
    for (std::size_t i = 0; i < v.n_legislators(); ++i)
        for (std::size_t j = 0; j < v.n_motions(); ++j) {
            Vote c = v.at(i, j);
            rows[i][j] = c == Vote::Yea ? 1 : c == Vote::Nay ? 0 : -1;
        }
    return rows;
}

py::dict simulate(std::size_t n, std::size_t m, const std::string& geometry,
                  const std::vector<std::tuple<std::size_t, double, double>>& blocs,
                  double missing_rate, double kappa_shape, double kappa_rate,
                  std::uint64_t seed) {
    SynthConfig cfg;
    cfg.n = n;
    cfg.m = m;
    if (geometry == "euclidean")
        cfg.geometry = Geometry::Euclidean;
    else if (geometry == "circular")
        cfg.geometry = Geometry::Circular;
    else
        throw std::invalid_argument("geometry must be 'euclidean' or 'circular'");
    for (const auto& [size, center, spread] : blocs) cfg.blocs.push_back({size, center, spread});
    cfg.missing_rate = missing_rate;
    cfg.kappa_shape = kappa_shape;
    cfg.kappa_rate = kappa_rate;
    cfg.seed = seed;
    auto r = generate(cfg);

    py::dict out;
    out["votes"] = votes_to_rows(r.votes);
    out["ids"] = r.votes.legislator_ids();
    out["true_beta"] = r.truth.beta;
    std::string positive, negative;
    std::vector<bool> scandal;
    for (const auto& row : r.meta.rows()) {
        if (row.anchor == AnchorRole::Positive) positive = row.id;
        if (row.anchor == AnchorRole::Negative) negative = row.id;
        scandal.push_back(row.scandal_flag);
    }
    out["anchor_positive"] = positive;
    out["anchor_negative"] = negative;
    out["scandal_flag"] = scandal;
    return out;
}

py::dict fit_euclidean_py(const std::vector<std::vector<int>>& votes,
                          const std::vector<std::string>& ids, const std::string& anchor_positive,
                          const std::string& anchor_negative, const std::string& link, int chains,
                          int iterations, int warmup, int keep_every, std::uint64_t seed) {
    auto v = votes_from_rows(votes, ids);
    auto meta = meta_with_anchors(ids, anchor_positive, anchor_negative);
    EuclideanConfig cfg;
    if (link == "probit")
        cfg.link = Link::Probit;
    else if (link == "logit")
        cfg.link = Link::Logit;
    else
        throw std::invalid_argument("link must be 'probit' or 'logit'");
    cfg.chains = chains;
    cfg.iterations = iterations;
    cfg.warmup = warmup;
    cfg.keep_every = keep_every;
    cfg.seed = seed;
    auto draws = fit_euclidean(v, meta, EuclideanPrior::standard(1), cfg);

    std::vector<std::vector<double>> beta(draws.draws.size()), mu(draws.draws.size()),
        alpha(draws.draws.size());
    for (std::size_t t = 0; t < draws.draws.size(); ++t) {
        const auto& d = draws.draws[t];
        beta[t].assign(d.beta.col(0).data(), d.beta.col(0).data() + d.beta.rows());
        mu[t].assign(d.mu.data(), d.mu.data() + d.mu.size());
        alpha[t].assign(d.alpha.col(0).data(), d.alpha.col(0).data() + d.alpha.rows());
    }
    py::dict out;
    out["beta"] = beta;
    out["mu"] = mu;
    out["alpha"] = alpha;
    out["chain"] = draws.chain_of_draw;
    out["acceptance_rate"] = draws.acceptance_rate;
    out["convergence_warning"] = draws.convergence_warning;
    return out;
}

py::dict fit_circular_py(const std::vector<std::vector<int>>& votes,
                         const std::vector<std::string>& ids, const std::string& anchor_positive,
                         const std::string& anchor_negative, int chains, int iterations,
                         int burnin, bool impute, std::uint64_t seed) {
    auto v = votes_from_rows(votes, ids);
    auto meta = meta_with_anchors(ids, anchor_positive, anchor_negative);
    CircularConfig cfg;
    cfg.chains = chains;
    cfg.iterations = iterations;
    cfg.burnin = burnin;
    cfg.impute = impute;
    cfg.seed = seed;
    auto draws = fit_circular(v, meta, cfg);

    std::vector<std::vector<double>> psi(draws.draws.size()), zeta(draws.draws.size()),
        kappa(draws.draws.size());
    for (std::size_t t = 0; t < draws.draws.size(); ++t) {
        psi[t] = draws.draws[t].params.psi;
        zeta[t] = draws.draws[t].params.zeta;
        kappa[t] = draws.draws[t].params.kappa;
    }
    py::dict out;
    out["beta"] = draws.beta_draw_matrix();
    out["psi"] = psi;
    out["zeta"] = zeta;
    out["kappa"] = kappa;
    out["chain"] = draws.chain_of_draw;
    out["acceptance_rate"] = draws.acceptance_rate;
    out["convergence_warning"] = draws.convergence_warning;
    return out;
}

py::dict align_py(const std::vector<std::vector<double>>& draws, std::size_t ref1,
                  std::size_t ref2, double epsilon) {
    auto aligned = align_and_project(draws, ref1, ref2, epsilon);
    py::dict out;
    out["angles"] = aligned.angles;
    out["tangent"] = aligned.tangent;
    std::vector<std::vector<bool>> valid(aligned.valid.size());
    for (std::size_t t = 0; t < aligned.valid.size(); ++t)
        valid[t].assign(aligned.valid[t].begin(), aligned.valid[t].end());
    out["valid"] = valid;
    out["reflections_applied"] = aligned.reflections_applied;
    return out;
}

py::dict regress_py(const std::vector<std::vector<double>>& draws, const std::vector<bool>& flags,
                    const std::vector<bool>& exclude) {
    std::vector<std::uint8_t> f(flags.begin(), flags.end());
    std::vector<std::uint8_t> e(exclude.begin(), exclude.end());
    auto ens = ensemble_regression(draws, f, e);
    auto stat = [](const EnsembleStat& s) {
        py::dict d;
        d["mean"] = s.mean;
        d["q0.5"] = s.q005;
        d["q2.5"] = s.q025;
        d["q97.5"] = s.q975;
        d["q99.5"] = s.q995;
        return d;
    };
    py::dict out;
    out["intercept"] = stat(ens.intercept);
    out["slope"] = stat(ens.slope);
    out["auc"] = stat(ens.auc_stat);
    out["separation_count"] = ens.separation_count;
    out["draws_excluded"] = ens.draws_excluded;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Bayesian spatial voting: Euclidean and circular ideal-point models";

    mod.def("simulate", &simulate, py::arg("n"), py::arg("m"), py::arg("geometry"),
            py::arg("blocs"), py::arg("missing_rate") = 0.0, py::arg("kappa_shape") = 1.0,
            py::arg("kappa_rate") = 0.5, py::arg("seed") = 1,
            "Simulate a roll-call matrix; blocs are (size, center, spread) tuples.");

    mod.def("fit_euclidean", &fit_euclidean_py, py::arg("votes"), py::arg("ids"),
            py::arg("anchor_positive"), py::arg("anchor_negative"), py::arg("link") = "logit",
            py::arg("chains") = 4, py::arg("iterations") = 80000, py::arg("warmup") = 16000,
            py::arg("keep_every") = 5, py::arg("seed") = 1,
            "Fit the Euclidean ideal-point model; cells are 1 (Yea), 0 (Nay), -1 (missing).");

    mod.def("fit_circular", &fit_circular_py, py::arg("votes"), py::arg("ids"),
            py::arg("anchor_positive"), py::arg("anchor_negative"), py::arg("chains") = 1,
            py::arg("iterations") = 30000, py::arg("burnin") = 10000, py::arg("impute") = true,
            py::arg("seed") = 1, "Fit the circular ideal-point model.");

    mod.def("align_and_project", &align_py, py::arg("draws"), py::arg("ref1"), py::arg("ref2"),
            py::arg("epsilon") = 1e-3,
            "Rotate/reflect circular draws to the identified frame and project to the tangent.");

    mod.def("ensemble_regression", &regress_py, py::arg("draws"), py::arg("flags"),
            py::arg("exclude"),
            "Per-draw logistic regression of a binary flag on ideal points, with AUC.");

    mod.def("link_cdf", &link_cdf, py::arg("z"), py::arg("kappa"),
            "CDF of the circular model's scaled symmetric Beta link.");
    mod.def("link_density", &link_density, py::arg("z"), py::arg("kappa"));
    mod.def("geodesic_distance", &geodesic_distance, py::arg("a"), py::arg("b"));
    mod.def("pearson_correlation", &pearson_correlation, py::arg("x"), py::arg("y"));
    mod.def("circular_correlation", &circular_correlation, py::arg("a"), py::arg("b"));
}
