#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spatialvote/data.hpp"

namespace spatialvote {

/// Rotation/reflection-identified circular draws with tangent projections.
struct AlignedSample {
    std::vector<std::vector<double>> angles;   // draws x n, ref1 at pi/2
    std::vector<std::vector<double>> tangent;  // draws x n, tan(theta - pi/2)
    std::vector<std::vector<std::uint8_t>> valid;
    std::size_t ref1 = 0, ref2 = 0;
    std::size_t reflections_applied = 0;
    std::size_t reflection_ties = 0;
};

/// Per draw, rotate all angles so that ref1 sits exactly at pi/2.
std::vector<std::vector<double>> align_rotation(const std::vector<std::vector<double>>& draws,
                                                std::size_t ref1);

/// Per draw (rotation already applied), reflect about the axis through pi/2
/// (theta -> pi - theta) whenever ref2's tangent coordinate would be
/// negative. Ties (ref2 exactly on the axis) break toward no reflection and
/// are counted.
std::vector<std::vector<double>> align_reflection(const std::vector<std::vector<double>>& draws,
                                                  std::size_t ref1, std::size_t ref2,
                                                  std::size_t* reflections = nullptr,
                                                  std::size_t* ties = nullptr);

struct TangentProjection {
    std::vector<std::vector<double>> values;
    std::vector<std::vector<std::uint8_t>> valid;
};

/// Log-map projection tan(theta - pi/2); flagged invalid when the angle is
/// within `epsilon` of the cut, i.e. |theta - pi/2| >= pi/2 - epsilon.
TangentProjection tangent_project(const std::vector<std::vector<double>>& aligned_draws,
                                  double epsilon = 1e-3);

/// Full identification pipeline: rotation, reflection, projection.
AlignedSample align_and_project(const std::vector<std::vector<double>>& raw_draws,
                                std::size_t ref1, std::size_t ref2, double epsilon = 1e-3);

struct LegislatorSummary {
    std::string id;
    double mean = 0.0, lower = 0.0, upper = 0.0;
    bool significant = false;   // 95% interval excludes 0
    double prob_below = 0.0;    // P(value < threshold_low)
    double prob_above = 0.0;    // P(value > threshold_high)
};

struct GroupSummary {
    double min = 0.0, max = 0.0;
    double cv_percent = 0.0;
    bool cv_available = false;  // needs >= 2 members
};

struct PosteriorSummary {
    std::vector<LegislatorSummary> legislators;
    std::map<std::string, GroupSummary> by_bloc;
    std::map<std::string, GroupSummary> by_party;
};

struct SummarizeOptions {
    double threshold_low = -1.0;
    double threshold_high = 1.0;
};

/// Means, 2.5/97.5 percentile intervals, group min/max/CV of the
/// posterior-mean points, and tail probabilities as empirical fractions.
PosteriorSummary summarize(const std::vector<std::vector<double>>& draws,
                           const std::vector<std::string>& legislator_ids, const Metadata& meta,
                           const SummarizeOptions& options = {});

struct ModelComparison {
    double correlation = 0.0;
    std::vector<std::string> excluded_ids;
    std::vector<std::string> compared_ids;
    std::vector<double> euclidean_means, tangent_means;  // aligned with compared_ids
};

struct CompareOptions {
    double min_valid_fraction = 0.5;
    double tangent_mean_cutoff = 50.0;
};

/// Pearson correlation between Euclidean posterior means and tangent-space
/// posterior means, after excluding legislators with unstable projections.
ModelComparison compare_models(const std::vector<double>& euclidean_means,
                               const std::vector<double>& tangent_means,
                               const std::vector<double>& valid_fraction,
                               const std::vector<std::string>& legislator_ids,
                               const CompareOptions& options = {});

/// Empirical percentile (type-7 linear interpolation).
double percentile(std::vector<double> values, double q);

/// Pearson correlation of two equal-length vectors.
double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

/// Fisher–Lee circular correlation between two angle vectors.
double circular_correlation(const std::vector<double>& a, const std::vector<double>& b);

/// Circular mean direction of the draws for each legislator (column).
std::vector<double> circular_mean_by_column(const std::vector<std::vector<double>>& draws);

}  // namespace spatialvote
