#include "spatialvote/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "spatialvote/special.hpp"

namespace spatialvote {

std::vector<std::vector<double>> align_rotation(const std::vector<std::vector<double>>& draws,
                                                std::size_t ref1) {
    std::vector<std::vector<double>> out;
    out.reserve(draws.size());
    for (const auto& draw : draws) {
        double shift = draw.at(ref1) - kPi / 2.0;
        std::vector<double> aligned(draw.size());
        for (std::size_t i = 0; i < draw.size(); ++i) aligned[i] = wrap_angle(draw[i] - shift);
        aligned[ref1] = kPi / 2.0;  // exact, not just to wrapping precision
        out.push_back(std::move(aligned));
    }
    return out;
}

std::vector<std::vector<double>> align_reflection(const std::vector<std::vector<double>>& draws,
                                                  std::size_t ref1, std::size_t ref2,
                                                  std::size_t* reflections, std::size_t* ties) {
    std::vector<std::vector<double>> out;
    out.reserve(draws.size());
    std::size_t n_reflect = 0, n_tie = 0;
    for (const auto& draw : draws) {
        // ref2's tangent coordinate is tan(theta - pi/2); its sign is the
        // sign of sin(theta - pi/2), well defined even outside the window.
        double s = std::sin(draw.at(ref2) - kPi / 2.0);
        if (s == 0.0) ++n_tie;
        if (s < 0.0) {
            ++n_reflect;
            std::vector<double> reflected(draw.size());
            for (std::size_t i = 0; i < draw.size(); ++i)
                reflected[i] = wrap_angle(kPi - draw[i]);
            reflected[ref1] = kPi / 2.0;
            out.push_back(std::move(reflected));
        } else {
            out.push_back(draw);
        }
    }
    if (reflections) *reflections = n_reflect;
    if (ties) *ties = n_tie;
    return out;
}

TangentProjection tangent_project(const std::vector<std::vector<double>>& aligned_draws,
                                  double epsilon) {
    TangentProjection out;
    out.values.reserve(aligned_draws.size());
    out.valid.reserve(aligned_draws.size());
    for (const auto& draw : aligned_draws) {
        std::vector<double> t(draw.size());
        std::vector<std::uint8_t> ok(draw.size());
        for (std::size_t i = 0; i < draw.size(); ++i) {
            double offset = wrap_angle(draw[i] - kPi / 2.0);
            bool valid = std::fabs(offset) < kPi / 2.0 - epsilon;
            t[i] = valid ? std::tan(offset) : std::numeric_limits<double>::quiet_NaN();
            ok[i] = valid ? 1 : 0;
        }
        out.values.push_back(std::move(t));
        out.valid.push_back(std::move(ok));
    }
    return out;
}

AlignedSample align_and_project(const std::vector<std::vector<double>>& raw_draws,
                                std::size_t ref1, std::size_t ref2, double epsilon) {
    AlignedSample s;
    s.ref1 = ref1;
    s.ref2 = ref2;
    auto rotated = align_rotation(raw_draws, ref1);
    s.angles = align_reflection(rotated, ref1, ref2, &s.reflections_applied, &s.reflection_ties);
    auto proj = tangent_project(s.angles, epsilon);
    s.tangent = std::move(proj.values);
    s.valid = std::move(proj.valid);
    return s;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile of empty set");
    std::sort(values.begin(), values.end());
    double h = (values.size() - 1) * q;
    std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    double frac = h - lo;
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("correlation needs two equal-length vectors");
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("correlation undefined: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

double circular_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("circular correlation needs equal-length vectors");
    double sa = 0.0, ca = 0.0, sb = 0.0, cb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += std::sin(a[i]);
        ca += std::cos(a[i]);
        sb += std::sin(b[i]);
        cb += std::cos(b[i]);
    }
    double mean_a = std::atan2(sa, ca), mean_b = std::atan2(sb, cb);
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double u = std::sin(a[i] - mean_a), v = std::sin(b[i] - mean_b);
        num += u * v;
        da += u * u;
        db += v * v;
    }
    if (da == 0.0 || db == 0.0)
        throw std::invalid_argument("circular correlation undefined: zero dispersion");
    return num / std::sqrt(da * db);
}

std::vector<double> circular_mean_by_column(const std::vector<std::vector<double>>& draws) {
    if (draws.empty()) return {};
    std::size_t n = draws[0].size();
    std::vector<double> s(n, 0.0), c(n, 0.0);
    for (const auto& d : draws)
        for (std::size_t i = 0; i < n; ++i) {
            s[i] += std::sin(d[i]);
            c[i] += std::cos(d[i]);
        }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::atan2(s[i], c[i]);
    return out;
}

namespace {

GroupSummary group_summary(const std::vector<double>& member_means) {
    GroupSummary g;
    g.min = *std::min_element(member_means.begin(), member_means.end());
    g.max = *std::max_element(member_means.begin(), member_means.end());
    if (member_means.size() >= 2) {
        double mu = std::accumulate(member_means.begin(), member_means.end(), 0.0) /
                    member_means.size();
        double s2 = 0.0;
        for (double x : member_means) s2 += (x - mu) * (x - mu);
        double sd = std::sqrt(s2 / (member_means.size() - 1));
        // |mean| denominator keeps CV positive for all-negative groups
        g.cv_percent = 100.0 * sd / std::fabs(mu);
        g.cv_available = std::fabs(mu) > 0.0;
    }
    return g;
}

}  // namespace

PosteriorSummary summarize(const std::vector<std::vector<double>>& draws,
                           const std::vector<std::string>& legislator_ids, const Metadata& meta,
                           const SummarizeOptions& options) {
    if (draws.size() < 100) throw std::invalid_argument("summarize needs at least 100 draws");
    const std::size_t n = legislator_ids.size();
    PosteriorSummary out;
    std::map<std::string, std::vector<double>> bloc_means, party_means;

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> col;
        col.reserve(draws.size());
        for (const auto& d : draws) col.push_back(d[i]);
        LegislatorSummary s;
        s.id = legislator_ids[i];
        s.mean = std::accumulate(col.begin(), col.end(), 0.0) / col.size();
        s.lower = percentile(col, 0.025);
        s.upper = percentile(col, 0.975);
        s.significant = s.lower > 0.0 || s.upper < 0.0;
        std::size_t below = 0, above = 0;
        for (double x : col) {
            if (x < options.threshold_low) ++below;
            if (x > options.threshold_high) ++above;
        }
        s.prob_below = static_cast<double>(below) / col.size();
        s.prob_above = static_cast<double>(above) / col.size();
        const auto& m = meta.by_id(s.id);
        bloc_means[bloc_to_string(m.bloc)].push_back(s.mean);
        party_means[m.party].push_back(s.mean);
        out.legislators.push_back(std::move(s));
    }
    for (const auto& [bloc, means] : bloc_means) out.by_bloc.emplace(bloc, group_summary(means));
    for (const auto& [party, means] : party_means)
        out.by_party.emplace(party, group_summary(means));
    return out;
}

ModelComparison compare_models(const std::vector<double>& euclidean_means,
                               const std::vector<double>& tangent_means,
                               const std::vector<double>& valid_fraction,
                               const std::vector<std::string>& legislator_ids,
                               const CompareOptions& options) {
    if (euclidean_means.size() != tangent_means.size() ||
        euclidean_means.size() != legislator_ids.size())
        throw std::invalid_argument("compare_models: mismatched legislator sets");
    ModelComparison out;
    for (std::size_t i = 0; i < legislator_ids.size(); ++i) {
        bool drop = valid_fraction[i] < options.min_valid_fraction ||
                    !std::isfinite(tangent_means[i]) ||
                    std::fabs(tangent_means[i]) > options.tangent_mean_cutoff;
        if (drop) {
            out.excluded_ids.push_back(legislator_ids[i]);
        } else {
            out.compared_ids.push_back(legislator_ids[i]);
            out.euclidean_means.push_back(euclidean_means[i]);
            out.tangent_means.push_back(tangent_means[i]);
        }
    }
    out.correlation = pearson_correlation(out.euclidean_means, out.tangent_means);
    return out;
}

}  // namespace spatialvote
