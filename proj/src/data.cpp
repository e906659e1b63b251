#include "spatialvote/data.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace spatialvote {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void check_unique(const std::vector<std::string>& ids, const char* what) {
    std::set<std::string> seen;
    for (const auto& id : ids)
        if (!seen.insert(id).second)
            throw ValidationError(std::string("duplicate ") + what + " id: " + id);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

VoteMatrix::VoteMatrix(std::vector<std::string> legislator_ids, std::vector<std::string> motion_ids,
                       std::vector<Vote> cells)
    : legislator_ids_(std::move(legislator_ids)),
      motion_ids_(std::move(motion_ids)),
      cells_(std::move(cells)) {
    check_unique(legislator_ids_, "legislator");
    check_unique(motion_ids_, "motion");
    if (cells_.size() != legislator_ids_.size() * motion_ids_.size())
        throw ValidationError("vote cell count does not match matrix dimensions");
}

std::size_t VoteMatrix::missing_in_row(std::size_t i) const {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n_motions(); ++j)
        if (at(i, j) == Vote::Missing) ++c;
    return c;
}

VoteMatrix load_votes(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty()) throw ParseError("empty votes file: " + path);
    auto header = split_csv_line(lines[0]);
    if (header.size() < 2) throw ParseError("votes header needs an id column and motions: " + path);
    std::vector<std::string> motions(header.begin() + 1, header.end());

    std::vector<std::string> legislators;
    std::vector<Vote> cells;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        auto fields = split_csv_line(lines[r]);
        if (fields.size() != motions.size() + 1)
            throw ParseError("row " + std::to_string(r + 1) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(motions.size() + 1));
        legislators.push_back(fields[0]);
        for (std::size_t c = 1; c < fields.size(); ++c) {
            const std::string& f = fields[c];
            if (f == "1")
                cells.push_back(Vote::Yea);
            else if (f == "0")
                cells.push_back(Vote::Nay);
            else if (f == "NA")
                cells.push_back(Vote::Missing);
            else
                throw ParseError("malformed cell \"" + f + "\" at row " + std::to_string(r + 1) +
                                 ", column " + std::to_string(c + 1));
        }
    }
    return VoteMatrix(std::move(legislators), std::move(motions), std::move(cells));
}

void write_votes(const std::string& path, const VoteMatrix& v) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "id";
    for (const auto& m : v.motion_ids()) out << ',' << m;
    out << '\n';
    for (std::size_t i = 0; i < v.n_legislators(); ++i) {
        out << v.legislator_ids()[i];
        for (std::size_t j = 0; j < v.n_motions(); ++j) {
            switch (v.at(i, j)) {
                case Vote::Yea: out << ",1"; break;
                case Vote::Nay: out << ",0"; break;
                case Vote::Missing: out << ",NA"; break;
            }
        }
        out << '\n';
    }
}

std::string bloc_to_string(Bloc b) {
    switch (b) {
        case Bloc::Coalition: return "coalition";
        case Bloc::Opposition: return "opposition";
        case Bloc::Independent: return "independent";
        case Bloc::Minority: return "minority";
    }
    return "independent";
}

Bloc bloc_from_string(const std::string& s) {
    if (s == "coalition") return Bloc::Coalition;
    if (s == "opposition") return Bloc::Opposition;
    if (s == "independent") return Bloc::Independent;
    if (s == "minority") return Bloc::Minority;
    throw ParseError("unknown bloc: " + s);
}

Metadata::Metadata(std::vector<LegislatorMeta> rows) : rows_(std::move(rows)) {
    int positives = 0, negatives = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!index_.emplace(rows_[i].id, i).second)
            throw ValidationError("duplicate legislator id in metadata: " + rows_[i].id);
        if (rows_[i].anchor == AnchorRole::Positive) ++positives;
        if (rows_[i].anchor == AnchorRole::Negative) ++negatives;
    }
    if (positives > 1 || negatives > 1)
        throw ValidationError("at most one positive and one negative anchor allowed");
}

const LegislatorMeta& Metadata::by_id(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("no metadata for legislator: " + id);
    return rows_[it->second];
}

std::pair<std::size_t, std::size_t> Metadata::anchor_indices(const VoteMatrix& v) const {
    std::optional<std::size_t> pos, neg;
    for (std::size_t i = 0; i < v.n_legislators(); ++i) {
        const auto& id = v.legislator_ids()[i];
        if (!has(id)) continue;
        AnchorRole a = by_id(id).anchor;
        if (a == AnchorRole::Positive) pos = i;
        if (a == AnchorRole::Negative) neg = i;
    }
    if (!pos || !neg)
        throw ConfigError("exactly one positive and one negative anchor must be designated");
    return {*pos, *neg};
}

void Metadata::require_covers(const VoteMatrix& v) const {
    for (const auto& id : v.legislator_ids())
        if (!has(id)) throw ValidationError("metadata missing legislator: " + id);
}

Metadata load_meta(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty()) throw ParseError("empty metadata file: " + path);
    std::vector<LegislatorMeta> rows;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        auto f = split_csv_line(lines[r]);
        if (f.size() != 6)
            throw ParseError("metadata row " + std::to_string(r + 1) + " needs 6 fields");
        LegislatorMeta m;
        m.id = f[0];
        m.name = f[1];
        m.party = f[2];
        m.bloc = bloc_from_string(f[3]);
        if (f[4] == "1")
            m.scandal_flag = true;
        else if (f[4] == "0")
            m.scandal_flag = false;
        else
            throw ParseError("scandal_flag must be 0 or 1 at row " + std::to_string(r + 1));
        if (f[5] == "positive")
            m.anchor = AnchorRole::Positive;
        else if (f[5] == "negative")
            m.anchor = AnchorRole::Negative;
        else if (f[5].empty() || f[5] == "none")
            m.anchor = AnchorRole::None;
        else
            throw ParseError("anchor must be positive/negative/empty at row " +
                             std::to_string(r + 1));
        rows.push_back(std::move(m));
    }
    return Metadata(std::move(rows));
}

void write_meta(const std::string& path, const Metadata& meta) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "id,name,party,bloc,scandal_flag,anchor\n";
    for (const auto& m : meta.rows()) {
        out << m.id << ',' << m.name << ',' << m.party << ',' << bloc_to_string(m.bloc) << ','
            << (m.scandal_flag ? '1' : '0') << ',';
        if (m.anchor == AnchorRole::Positive)
            out << "positive";
        else if (m.anchor == AnchorRole::Negative)
            out << "negative";
        out << '\n';
    }
}

AttendanceMatrix load_attendance(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty()) throw ParseError("empty attendance file: " + path);
    auto header = split_csv_line(lines[0]);
    AttendanceMatrix a;
    a.motion_ids.assign(header.begin() + 1, header.end());
    for (std::size_t r = 1; r < lines.size(); ++r) {
        auto f = split_csv_line(lines[r]);
        if (f.size() != a.motion_ids.size() + 1)
            throw ParseError("attendance row " + std::to_string(r + 1) + " width mismatch");
        a.legislator_ids.push_back(f[0]);
        for (std::size_t c = 1; c < f.size(); ++c) {
            if (f[c] == "1")
                a.present.push_back(1);
            else if (f[c] == "0")
                a.present.push_back(0);
            else
                throw ParseError("attendance cell must be 0/1 at row " + std::to_string(r + 1) +
                                 ", column " + std::to_string(c + 1));
        }
    }
    return a;
}

ExclusionResult exclude_no_record(const VoteMatrix& v) {
    std::vector<std::string> kept_ids, excluded;
    std::vector<Vote> cells;
    for (std::size_t i = 0; i < v.n_legislators(); ++i) {
        if (v.missing_in_row(i) == v.n_motions()) {
            excluded.push_back(v.legislator_ids()[i]);
            continue;
        }
        kept_ids.push_back(v.legislator_ids()[i]);
        for (std::size_t j = 0; j < v.n_motions(); ++j) cells.push_back(v.at(i, j));
    }
    return {VoteMatrix(std::move(kept_ids), v.motion_ids(), std::move(cells)), std::move(excluded)};
}

ObservationMask complete_case_filter(const VoteMatrix& v) {
    ObservationMask mask;
    mask.n = v.n_legislators();
    mask.m = v.n_motions();
    mask.observed.reserve(mask.n * mask.m);
    for (Vote c : v.cells()) mask.observed.push_back(c == Vote::Missing ? 0 : 1);
    return mask;
}

ParticipationSummary participation_summary(const VoteMatrix& v, const Metadata& meta,
                                           const AttendanceMatrix* attendance) {
    if (v.n_motions() == 0) throw ValidationError("participation undefined for empty motion set");
    meta.require_covers(v);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::map<std::string, std::size_t> att_row;
    if (attendance) {
        if (attendance->motion_ids != v.motion_ids())
            throw ValidationError("attendance motions do not match vote matrix");
        for (std::size_t i = 0; i < attendance->legislator_ids.size(); ++i)
            att_row[attendance->legislator_ids[i]] = i;
    }

    ParticipationSummary out;
    out.has_attendance = attendance != nullptr;
    const double m = static_cast<double>(v.n_motions());
    for (std::size_t i = 0; i < v.n_legislators(); ++i) {
        LegislatorRates r;
        r.id = v.legislator_ids()[i];
        r.participation_rate = 1.0 - static_cast<double>(v.missing_in_row(i)) / m;
        if (attendance) {
            auto it = att_row.find(r.id);
            if (it == att_row.end())
                throw ValidationError("attendance missing legislator: " + r.id);
            std::size_t present = 0, abstained = 0;
            for (std::size_t j = 0; j < v.n_motions(); ++j) {
                bool p = attendance->present[it->second * v.n_motions() + j] != 0;
                present += p ? 1 : 0;
                if (p && v.at(i, j) == Vote::Missing) ++abstained;
            }
            r.attendance_rate = present / m;
            r.abstention_rate = abstained / m;
        } else {
            r.attendance_rate = nan;
            r.abstention_rate = nan;
        }
        out.legislators.push_back(r);
    }

    std::map<std::string, std::vector<const LegislatorRates*>> groups;
    for (const auto& r : out.legislators) groups[meta.by_id(r.id).party].push_back(&r);
    for (const auto& [party, members] : groups) {
        LegislatorRates agg;
        agg.id = party;
        double p = 0.0, a = 0.0, ab = 0.0;
        for (const auto* r : members) {
            p += r->participation_rate;
            a += r->attendance_rate;
            ab += r->abstention_rate;
        }
        agg.participation_rate = p / members.size();
        agg.attendance_rate = attendance ? a / members.size() : nan;
        agg.abstention_rate = attendance ? ab / members.size() : nan;
        out.by_party.emplace(party, agg);
    }
    return out;
}

}  // namespace spatialvote
