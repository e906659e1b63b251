#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spatialvote {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Vote : std::uint8_t { Nay = 0, Yea = 1, Missing = 2 };

/// Ternary roll-call matrix with legislator and motion registries.
/// Immutable after construction; safe to share read-only across threads.
class VoteMatrix {
public:
    VoteMatrix() = default;
    VoteMatrix(std::vector<std::string> legislator_ids, std::vector<std::string> motion_ids,
               std::vector<Vote> cells);

    std::size_t n_legislators() const { return legislator_ids_.size(); }
    std::size_t n_motions() const { return motion_ids_.size(); }

    Vote at(std::size_t i, std::size_t j) const { return cells_[i * n_motions() + j]; }

    const std::vector<std::string>& legislator_ids() const { return legislator_ids_; }
    const std::vector<std::string>& motion_ids() const { return motion_ids_; }
    const std::vector<Vote>& cells() const { return cells_; }

    std::size_t missing_in_row(std::size_t i) const;

private:
    std::vector<std::string> legislator_ids_;
    std::vector<std::string> motion_ids_;
    std::vector<Vote> cells_;  // row-major n x m
};

enum class Bloc { Coalition, Opposition, Independent, Minority };
enum class AnchorRole { None, Positive, Negative };

struct LegislatorMeta {
    std::string id;
    std::string name;
    std::string party;
    Bloc bloc = Bloc::Independent;
    bool scandal_flag = false;
    AnchorRole anchor = AnchorRole::None;
};

/// Legislator metadata table, validated against a VoteMatrix before fitting.
class Metadata {
public:
    Metadata() = default;
    explicit Metadata(std::vector<LegislatorMeta> rows);

    const std::vector<LegislatorMeta>& rows() const { return rows_; }
    const LegislatorMeta& by_id(const std::string& id) const;
    bool has(const std::string& id) const { return index_.count(id) > 0; }

    /// Indices (into the matrix row order) of the positive and negative
    /// anchors; throws ConfigError if either is missing.
    std::pair<std::size_t, std::size_t> anchor_indices(const VoteMatrix& v) const;

    /// Throws ValidationError unless every matrix legislator has metadata.
    void require_covers(const VoteMatrix& v) const;

private:
    std::vector<LegislatorMeta> rows_;
    std::map<std::string, std::size_t> index_;
};

/// Cell-level observation mask; true where the vote is observed.
struct ObservationMask {
    std::size_t n = 0, m = 0;
    std::vector<std::uint8_t> observed;  // row-major

    bool at(std::size_t i, std::size_t j) const { return observed[i * m + j] != 0; }
};

struct LegislatorRates {
    std::string id;
    double participation_rate = 0.0;
    double attendance_rate = 0.0;   // NaN when no attendance file was supplied
    double abstention_rate = 0.0;   // NaN likewise
};

struct ParticipationSummary {
    std::vector<LegislatorRates> legislators;
    std::map<std::string, LegislatorRates> by_party;  // id field holds the party
    bool has_attendance = false;
};

/// Binary present/absent matrix aligned with a VoteMatrix.
struct AttendanceMatrix {
    std::vector<std::string> legislator_ids;
    std::vector<std::string> motion_ids;
    std::vector<std::uint8_t> present;  // row-major
};

// ---- CSV ingestion and round-trip writer ----

/// Votes CSV: header row "id,<motion...>"; cells in {1, 0, NA}.
VoteMatrix load_votes(const std::string& path);
void write_votes(const std::string& path, const VoteMatrix& v);

/// Metadata CSV: id,name,party,bloc,scandal_flag,anchor.
Metadata load_meta(const std::string& path);
void write_meta(const std::string& path, const Metadata& meta);

AttendanceMatrix load_attendance(const std::string& path);

// ---- Policies ----

struct ExclusionResult {
    VoteMatrix matrix;
    std::vector<std::string> excluded_ids;
};

/// Remove legislators with no voting record at all (entirely Missing rows).
ExclusionResult exclude_no_record(const VoteMatrix& v);

/// Complete-case semantics: cell-level masking, not row deletion.
ObservationMask complete_case_filter(const VoteMatrix& v);

ParticipationSummary participation_summary(const VoteMatrix& v, const Metadata& meta,
                                           const AttendanceMatrix* attendance = nullptr);

std::string bloc_to_string(Bloc b);
Bloc bloc_from_string(const std::string& s);

}  // namespace spatialvote
