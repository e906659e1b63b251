// spatialvote: batch front-end for the ideal-point pipeline.
//
// Subcommands: simulate, fit, postprocess, regress, compare, diagnose.
// Each command reads an optional JSON config plus flag overrides
// (flags > file > defaults), validates all inputs before writing anything,
// and emits a run manifest with content digests of every file it touched.
//
// Exit codes: 0 success, 1 usage/config error, 2 data validation error,
// 3 convergence gate failure (--strict).

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spatialvote/analysis.hpp"
#include "spatialvote/circular.hpp"
#include "spatialvote/data.hpp"
#include "spatialvote/diagnostics.hpp"
#include "spatialvote/euclidean.hpp"
#include "spatialvote/postprocess.hpp"
#include "spatialvote/special.hpp"
#include "spatialvote/synth.hpp"

namespace sv = spatialvote;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------- small utilities ----------

std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sv::ParseError("cannot open file for digest: " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount()) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016" PRIx64, h);
    return out;
}

std::string fmt_double(double x) {
    if (std::isnan(x)) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string iso_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sv::ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw sv::ConfigError("config parse error in " + path + ": " + e.what());
    }
}

struct Manifest {
    std::string command;
    json config;
    std::map<std::string, std::string> inputs;   // path -> digest
    std::map<std::string, std::string> outputs;  // path -> digest
    json extra = json::object();

    void add_input(const std::string& path) { inputs[path] = fnv1a64_file(path); }
    void add_output(const std::string& path) { outputs[path] = fnv1a64_file(path); }

    void write(const std::string& path) const {
        json j;
        j["command"] = command;
        j["version"] = kVersion;
        j["config"] = config;
        j["inputs"] = inputs;
        j["outputs"] = outputs;
        for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
        // the only nondeterministic field, kept isolated for diffing
        j["timestamp"] = iso_now();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write manifest: " + path);
        out << j.dump(2) << '\n';
    }
};

// draw table: one chain-id column followed by named parameter columns
struct DrawTable {
    std::vector<std::string> columns;
    std::vector<int> chain;
    std::vector<std::vector<double>> rows;  // NaN encodes NA
};

void write_draws(const std::string& path, const DrawTable& t) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "chain";
    for (const auto& c : t.columns) out << ',' << c;
    out << '\n';
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out << t.chain[r];
        for (double x : t.rows[r]) out << ',' << fmt_double(x);
        out << '\n';
    }
}

DrawTable read_draws(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sv::ParseError("cannot open draws file: " + path);
    DrawTable t;
    std::string line;
    if (!std::getline(in, line)) throw sv::ParseError("empty draws file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream hs(line);
    std::string field;
    bool first = true;
    while (std::getline(hs, field, ',')) {
        if (first) {
            if (field != "chain")
                throw sv::ParseError("draws file must start with a chain column: " + path);
            first = false;
        } else {
            t.columns.push_back(field);
        }
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::vector<double> row;
        int chain = 0;
        bool got_chain = false;
        while (std::getline(ls, field, ',')) {
            if (!got_chain) {
                chain = std::stoi(field);
                got_chain = true;
            } else if (field == "NA") {
                row.push_back(std::nan(""));
            } else {
                row.push_back(std::stod(field));
            }
        }
        if (row.size() != t.columns.size())
            throw sv::ParseError("draws row " + std::to_string(lineno) + " width mismatch in " +
                                 path);
        t.chain.push_back(chain);
        t.rows.push_back(std::move(row));
    }
    if (t.rows.empty()) throw sv::ParseError("draws file has no rows: " + path);
    return t;
}

std::vector<std::vector<std::vector<double>>> split_by_chain(const DrawTable& t) {
    std::map<int, std::vector<std::vector<double>>> by_chain;
    for (std::size_t r = 0; r < t.rows.size(); ++r) by_chain[t.chain[r]].push_back(t.rows[r]);
    std::vector<std::vector<std::vector<double>>> out;
    for (auto& [id, rows] : by_chain) out.push_back(std::move(rows));
    return out;
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_outdir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw sv::ConfigError("cannot create output directory: " + dir);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw sv::ConfigError(std::string("config field has wrong type: ") + key);
    }
}

json diagnostics_json(const sv::ChainDiagnostics& d) {
    double max_rhat = 0.0, min_ess = std::numeric_limits<double>::infinity();
    std::size_t degenerate = 0;
    for (const auto& p : d.params) {
        if (p.degenerate) {
            ++degenerate;
            continue;
        }
        max_rhat = std::max(max_rhat, p.split_rhat);
        min_ess = std::min(min_ess, p.ess);
    }
    json j;
    j["parameters"] = d.params.size();
    j["max_split_rhat"] = max_rhat;
    j["min_ess"] = d.params.empty() || !std::isfinite(min_ess) ? 0.0 : min_ess;
    j["degenerate"] = degenerate;
    j["fraction_rhat_above_1.1"] = d.params.empty() ? 0.0 : d.fraction_rhat_above(1.1);
    return j;
}

// ---------- simulate ----------

sv::SynthConfig parse_synth_config(const json& cfg) {
    sv::SynthConfig s;
    s.n = get_or<std::size_t>(cfg, "n", 0);
    s.m = get_or<std::size_t>(cfg, "m", 0);
    std::string geom = get_or<std::string>(cfg, "geometry", "euclidean");
    if (geom == "euclidean")
        s.geometry = sv::Geometry::Euclidean;
    else if (geom == "circular")
        s.geometry = sv::Geometry::Circular;
    else
        throw sv::ConfigError("geometry must be euclidean or circular, got: " + geom);
    if (!cfg.contains("blocs") || !cfg["blocs"].is_array() || cfg["blocs"].empty())
        throw sv::ConfigError("config field blocs: nonempty array of {size, center, spread}");
    for (const auto& b : cfg["blocs"]) {
        sv::BlocSpec spec;
        spec.size = get_or<std::size_t>(b, "size", 0);
        spec.center = get_or<double>(b, "center", 0.0);
        spec.spread = get_or<double>(b, "spread", 0.25);
        s.blocs.push_back(spec);
    }
    std::string link = get_or<std::string>(cfg, "link", "probit");
    if (link == "probit")
        s.link = sv::Link::Probit;
    else if (link == "logit")
        s.link = sv::Link::Logit;
    else
        throw sv::ConfigError("link must be probit or logit, got: " + link);
    s.kappa_shape = get_or<double>(cfg, "kappa_shape", 1.0);
    s.kappa_rate = get_or<double>(cfg, "kappa_rate", 0.5);
    s.missing_rate = get_or<double>(cfg, "missing_rate", 0.0);
    s.seed = get_or<std::uint64_t>(cfg, "seed", 1);
    return s;
}

int cmd_simulate(const json& cfg, const std::string& outdir) {
    sv::SynthConfig s = parse_synth_config(cfg);
    s.validate();
    auto r = sv::generate(s);

    ensure_outdir(outdir);
    auto votes_path = out_path(outdir, "votes.csv");
    auto meta_path = out_path(outdir, "meta.csv");
    auto truth_path = out_path(outdir, "truth.csv");
    sv::write_votes(votes_path, r.votes);
    sv::write_meta(meta_path, r.meta);
    {
        std::ofstream out(truth_path);
        out << "id,parameter,value\n";
        for (std::size_t i = 0; i < s.n; ++i)
            out << r.votes.legislator_ids()[i] << ",beta," << fmt_double(r.truth.beta[i]) << '\n';
        for (std::size_t j = 0; j < s.m; ++j) {
            const auto& id = r.votes.motion_ids()[j];
            if (s.geometry == sv::Geometry::Euclidean) {
                out << id << ",mu," << fmt_double(r.truth.mu[j]) << '\n';
                out << id << ",alpha," << fmt_double(r.truth.alpha[j]) << '\n';
            } else {
                out << id << ",psi," << fmt_double(r.truth.psi[j]) << '\n';
                out << id << ",zeta," << fmt_double(r.truth.zeta[j]) << '\n';
                out << id << ",kappa," << fmt_double(r.truth.kappa[j]) << '\n';
            }
        }
    }

    Manifest man;
    man.command = "simulate";
    man.config = cfg;
    man.extra["seed"] = s.seed;
    man.add_output(votes_path);
    man.add_output(meta_path);
    man.add_output(truth_path);
    man.write(out_path(outdir, "manifest.json"));
    return 0;
}

// ---------- fit ----------

int cmd_fit_euclidean(const json& cfg, const sv::VoteMatrix& votes_raw, const sv::Metadata& meta,
                      const std::string& outdir, bool strict, Manifest& man) {
    sv::EuclideanConfig ec;
    std::string link = get_or<std::string>(cfg, "link", "logit");
    if (link == "probit")
        ec.link = sv::Link::Probit;
    else if (link == "logit")
        ec.link = sv::Link::Logit;
    else
        throw sv::ConfigError("link must be probit or logit, got: " + link);
    ec.d = get_or<int>(cfg, "d", 1);
    ec.chains = get_or<int>(cfg, "chains", 4);
    ec.iterations = get_or<int>(cfg, "iterations", 80000);
    ec.warmup = get_or<int>(cfg, "warmup", 16000);
    ec.keep_every = get_or<int>(cfg, "keep_every", 5);
    ec.seed = get_or<std::uint64_t>(cfg, "seed", 1);
    ec.n_leapfrog = get_or<int>(cfg, "n_leapfrog", 20);
    ec.step_size_init = get_or<double>(cfg, "step_size_init", 0.05);
    ec.target_accept = get_or<double>(cfg, "target_accept", 0.75);
    if (ec.d < 1) throw sv::ConfigError("d must be >= 1");
    if (ec.iterations <= ec.warmup) throw sv::ConfigError("iterations must exceed warmup");
    if (ec.keep_every < 1) throw sv::ConfigError("keep_every must be >= 1");

    auto excl = sv::exclude_no_record(votes_raw);
    const sv::VoteMatrix& votes = excl.matrix;
    auto prior = sv::EuclideanPrior::standard(ec.d);
    auto fit = sv::fit_euclidean(votes, meta, prior, ec);

    const std::size_t n = votes.n_legislators(), m = votes.n_motions();
    DrawTable beta, mu, alpha;
    for (std::size_t i = 0; i < n; ++i) beta.columns.push_back(votes.legislator_ids()[i]);
    for (std::size_t j = 0; j < m; ++j) mu.columns.push_back(votes.motion_ids()[j]);
    for (int k = 0; k < ec.d; ++k)
        for (std::size_t j = 0; j < m; ++j)
            alpha.columns.push_back(ec.d == 1 ? votes.motion_ids()[j]
                                              : votes.motion_ids()[j] + ":" + std::to_string(k));
    for (std::size_t t = 0; t < fit.draws.size(); ++t) {
        const auto& d = fit.draws[t];
        int c = fit.chain_of_draw[t];
        std::vector<double> brow(n), mrow(m), arow(m * ec.d);
        for (std::size_t i = 0; i < n; ++i) brow[i] = d.beta(i, 0);
        for (std::size_t j = 0; j < m; ++j) mrow[j] = d.mu[j];
        for (int k = 0; k < ec.d; ++k)
            for (std::size_t j = 0; j < m; ++j) arow[k * m + j] = d.alpha(j, k);
        beta.chain.push_back(c);
        beta.rows.push_back(std::move(brow));
        mu.chain.push_back(c);
        mu.rows.push_back(std::move(mrow));
        alpha.chain.push_back(c);
        alpha.rows.push_back(std::move(arow));
    }

    ensure_outdir(outdir);
    write_draws(out_path(outdir, "beta.csv"), beta);
    write_draws(out_path(outdir, "mu.csv"), mu);
    write_draws(out_path(outdir, "alpha.csv"), alpha);
    man.add_output(out_path(outdir, "beta.csv"));
    man.add_output(out_path(outdir, "mu.csv"));
    man.add_output(out_path(outdir, "alpha.csv"));

    man.extra["seed"] = ec.seed;
    man.extra["schedule"] = {{"chains", ec.chains},
                             {"iterations", ec.iterations},
                             {"warmup", ec.warmup},
                             {"keep_every", ec.keep_every},
                             {"retained_per_chain", ec.retained_per_chain()}};
    man.extra["acceptance_rates"] = fit.acceptance_rate;
    man.extra["diagnostics"] = diagnostics_json(fit.diag);
    man.extra["warnings"] = {{"convergence_warning", fit.convergence_warning},
                             {"excluded_no_record", excl.excluded_ids}};
    man.write(out_path(outdir, "manifest.json"));
    if (strict && fit.convergence_warning) {
        std::fprintf(stderr, "convergence gate failed: fraction of split R-hat above 1.1 "
                             "exceeds 0.05\n");
        return 3;
    }
    return 0;
}

int cmd_fit_circular(const json& cfg, const sv::VoteMatrix& votes_raw, const sv::Metadata& meta,
                     const std::string& outdir, bool strict, Manifest& man) {
    sv::CircularConfig cc;
    cc.chains = get_or<int>(cfg, "chains", 1);
    cc.iterations = get_or<int>(cfg, "iterations", 30000);
    cc.burnin = get_or<int>(cfg, "burnin", 10000);
    cc.seed = get_or<std::uint64_t>(cfg, "seed", 1);
    cc.step_size_init = get_or<double>(cfg, "step_size_init", 0.02);
    cc.n_leapfrog = get_or<int>(cfg, "n_leapfrog", 8);
    cc.target_accept = get_or<double>(cfg, "target_accept", 0.75);
    cc.impute = get_or<bool>(cfg, "impute", true);
    if (cfg.contains("prior")) {
        const auto& p = cfg["prior"];
        cc.prior.omega_beta_rate = get_or<double>(p, "omega_beta_rate", cc.prior.omega_beta_rate);
        cc.prior.beta_kappa_rate = get_or<double>(p, "beta_kappa_rate", cc.prior.beta_kappa_rate);
        cc.prior.scale_convention =
            get_or<bool>(p, "scale_convention", cc.prior.scale_convention);
    }
    if (cc.iterations <= cc.burnin) throw sv::ConfigError("iterations must exceed burnin");

    auto excl = sv::exclude_no_record(votes_raw);
    const sv::VoteMatrix& votes = excl.matrix;
    auto fit = sv::fit_circular(votes, meta, cc);

    const std::size_t n = votes.n_legislators(), m = votes.n_motions();
    DrawTable beta, psi, zeta, kappa, hyper;
    beta.columns = votes.legislator_ids();
    psi.columns = votes.motion_ids();
    zeta.columns = votes.motion_ids();
    kappa.columns = votes.motion_ids();
    hyper.columns = {"omega_beta", "beta_kappa"};
    for (std::size_t t = 0; t < fit.draws.size(); ++t) {
        const auto& p = fit.draws[t].params;
        int c = fit.chain_of_draw[t];
        beta.chain.push_back(c);
        beta.rows.push_back(p.beta);
        psi.chain.push_back(c);
        psi.rows.push_back(p.psi);
        zeta.chain.push_back(c);
        zeta.rows.push_back(p.zeta);
        kappa.chain.push_back(c);
        kappa.rows.push_back(p.kappa);
        hyper.chain.push_back(c);
        hyper.rows.push_back({p.omega_beta, p.beta_kappa});
    }

    ensure_outdir(outdir);
    write_draws(out_path(outdir, "beta.csv"), beta);
    write_draws(out_path(outdir, "psi.csv"), psi);
    write_draws(out_path(outdir, "zeta.csv"), zeta);
    write_draws(out_path(outdir, "kappa.csv"), kappa);
    write_draws(out_path(outdir, "hyper.csv"), hyper);
    for (const char* f : {"beta.csv", "psi.csv", "zeta.csv", "kappa.csv", "hyper.csv"})
        man.add_output(out_path(outdir, f));

    man.extra["seed"] = cc.seed;
    man.extra["schedule"] = {{"chains", cc.chains},
                             {"iterations", cc.iterations},
                             {"burnin", cc.burnin},
                             {"retained_per_chain", cc.retained_per_chain()},
                             {"impute", cc.impute}};
    man.extra["acceptance_rates"] = fit.acceptance_rate;
    man.extra["diagnostics"] = diagnostics_json(fit.diag);
    man.extra["warnings"] = {{"convergence_warning", fit.convergence_warning},
                             {"excluded_no_record", excl.excluded_ids},
                             {"missing_cells", fit.missing_cells.size()}};
    man.write(out_path(outdir, "manifest.json"));
    if (strict && fit.convergence_warning) {
        std::fprintf(stderr, "convergence gate failed: fraction of split R-hat above 1.1 "
                             "exceeds 0.05\n");
        return 3;
    }
    return 0;
}

// ---------- postprocess ----------

int cmd_postprocess(const std::string& draws_path, const std::string& meta_path,
                    const std::string& ref1_id, const std::string& ref2_id, double epsilon,
                    double threshold_low, double threshold_high, const std::string& outdir) {
    auto table = read_draws(draws_path);
    auto meta = sv::load_meta(meta_path);
    for (const auto& id : table.columns)
        if (!meta.has(id)) throw sv::ValidationError("metadata missing legislator: " + id);

    auto find_col = [&](const std::string& id) -> std::size_t {
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            if (table.columns[i] == id) return i;
        throw sv::ConfigError("reference legislator not found in draws: " + id);
    };
    std::size_t ref1 = find_col(ref1_id), ref2 = find_col(ref2_id);
    if (ref1 == ref2) throw sv::ConfigError("ref1 and ref2 must differ");

    auto aligned = sv::align_and_project(table.rows, ref1, ref2, epsilon);

    ensure_outdir(outdir);
    DrawTable angle_out{table.columns, table.chain, aligned.angles};
    DrawTable tangent_out{table.columns, table.chain, aligned.tangent};
    write_draws(out_path(outdir, "aligned.csv"), angle_out);
    write_draws(out_path(outdir, "tangent.csv"), tangent_out);

    // summary statistics on the tangent scale, restricted to valid values
    const std::size_t n = table.columns.size(), t_draws = aligned.tangent.size();
    std::vector<double> valid_fraction(n, 0.0);
    std::vector<std::string> invalid_ids;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t ok = 0;
        for (std::size_t t = 0; t < t_draws; ++t) ok += aligned.valid[t][i];
        valid_fraction[i] = static_cast<double>(ok) / t_draws;
        if (ok < t_draws) invalid_ids.push_back(table.columns[i]);
    }

    // draws that are valid for every legislator feed the posterior summary
    std::vector<std::vector<double>> complete;
    for (std::size_t t = 0; t < t_draws; ++t) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i)
            if (!aligned.valid[t][i]) {
                all = false;
                break;
            }
        if (all) complete.push_back(aligned.tangent[t]);
    }
    json summary_note = json::object();
    auto summary_path = out_path(outdir, "summary.csv");
    if (complete.size() >= 100) {
        auto s = sv::summarize(complete, table.columns, meta, {threshold_low, threshold_high});
        std::ofstream out(summary_path);
        out << "id,mean,lower,upper,significant,prob_below,prob_above\n";
        for (const auto& l : s.legislators)
            out << l.id << ',' << fmt_double(l.mean) << ',' << fmt_double(l.lower) << ','
                << fmt_double(l.upper) << ',' << (l.significant ? 1 : 0) << ','
                << fmt_double(l.prob_below) << ',' << fmt_double(l.prob_above) << '\n';
        json groups;
        auto dump_groups = [](const std::map<std::string, sv::GroupSummary>& g) {
            json out = json::object();
            for (const auto& [name, v] : g) {
                out[name] = {{"min", v.min},
                             {"max", v.max},
                             {"cv_percent", v.cv_available ? json(v.cv_percent) : json()},
                             {"cv_available", v.cv_available}};
            }
            return out;
        };
        groups["by_bloc"] = dump_groups(s.by_bloc);
        groups["by_party"] = dump_groups(s.by_party);
        summary_note = groups;
    } else {
        std::ofstream out(summary_path);
        out << "id,mean,lower,upper,significant,prob_below,prob_above\n";
        summary_note["skipped"] = "fewer than 100 fully valid draws";
    }

    Manifest man;
    man.command = "postprocess";
    man.config = {{"draws", draws_path}, {"meta", meta_path},    {"ref1", ref1_id},
                  {"ref2", ref2_id},     {"epsilon", epsilon},   {"threshold_low", threshold_low},
                  {"threshold_high", threshold_high}};
    man.add_input(draws_path);
    man.add_input(meta_path);
    man.add_output(out_path(outdir, "aligned.csv"));
    man.add_output(out_path(outdir, "tangent.csv"));
    man.add_output(summary_path);
    man.extra["reflections_applied"] = aligned.reflections_applied;
    man.extra["reflection_ties"] = aligned.reflection_ties;
    man.extra["groups"] = summary_note;
    json vf = json::object();
    for (std::size_t i = 0; i < n; ++i) vf[table.columns[i]] = valid_fraction[i];
    man.extra["valid_fraction"] = vf;
    man.extra["warnings"] = {{"tangent_invalid_ids", invalid_ids}};
    man.write(out_path(outdir, "manifest.json"));
    return 0;
}

// ---------- regress ----------

int cmd_regress(const std::string& draws_path, const std::string& meta_path,
                const std::string& outdir) {
    auto table = read_draws(draws_path);
    auto meta = sv::load_meta(meta_path);
    const std::size_t n = table.columns.size();

    std::vector<std::uint8_t> flags(n), exclude(n);
    std::vector<std::string> excluded_ids;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& m = meta.by_id(table.columns[i]);
        flags[i] = m.scandal_flag ? 1 : 0;
        exclude[i] = m.anchor != sv::AnchorRole::None ? 1 : 0;
        if (exclude[i]) excluded_ids.push_back(m.id);
    }

    std::vector<std::vector<std::uint8_t>> valid;
    bool any_nan = false;
    for (const auto& r : table.rows)
        for (double x : r)
            if (std::isnan(x)) any_nan = true;
    if (any_nan) {
        valid.assign(table.rows.size(), std::vector<std::uint8_t>(n, 1));
        for (std::size_t t = 0; t < table.rows.size(); ++t)
            for (std::size_t i = 0; i < n; ++i)
                if (std::isnan(table.rows[t][i])) valid[t][i] = 0;
    }

    auto ens = sv::ensemble_regression(table.rows, flags, exclude, valid);

    ensure_outdir(outdir);
    auto ens_path = out_path(outdir, "ensemble.csv");
    {
        std::ofstream out(ens_path);
        out << "intercept,slope,auc\n";
        for (std::size_t t = 0; t < ens.slopes.size(); ++t)
            out << fmt_double(ens.intercepts[t]) << ',' << fmt_double(ens.slopes[t]) << ','
                << fmt_double(ens.aucs[t]) << '\n';
    }
    auto stat_json = [](const sv::EnsembleStat& s) {
        return json{{"mean", s.mean},
                    {"q0.5", s.q005},
                    {"q2.5", s.q025},
                    {"q97.5", s.q975},
                    {"q99.5", s.q995}};
    };
    auto quant_path = out_path(outdir, "quantiles.json");
    {
        json q;
        q["intercept"] = stat_json(ens.intercept);
        q["slope"] = stat_json(ens.slope);
        q["auc"] = stat_json(ens.auc_stat);
        std::ofstream out(quant_path);
        out << q.dump(2) << '\n';
    }

    Manifest man;
    man.command = "regress";
    man.config = {{"draws", draws_path}, {"meta", meta_path}};
    man.add_input(draws_path);
    man.add_input(meta_path);
    man.add_output(ens_path);
    man.add_output(quant_path);
    man.extra["warnings"] = {{"separation_count", ens.separation_count},
                             {"draws_excluded", ens.draws_excluded},
                             {"anchors_excluded", excluded_ids}};
    man.write(out_path(outdir, "manifest.json"));
    return 0;
}

// ---------- compare ----------

int cmd_compare(const std::string& euclid_path, const std::string& tangent_path,
                double min_valid_fraction, double tangent_cutoff, const std::string& outdir) {
    auto e = read_draws(euclid_path);
    auto t = read_draws(tangent_path);
    if (e.columns != t.columns)
        throw sv::ValidationError("compare: legislator columns differ between inputs");
    const std::size_t n = e.columns.size();

    std::vector<double> euclid_mean(n, 0.0), tangent_mean(n, 0.0), valid_fraction(n, 0.0);
    for (const auto& r : e.rows)
        for (std::size_t i = 0; i < n; ++i) euclid_mean[i] += r[i];
    for (double& x : euclid_mean) x /= e.rows.size();
    std::vector<std::size_t> ok(n, 0);
    for (const auto& r : t.rows)
        for (std::size_t i = 0; i < n; ++i)
            if (!std::isnan(r[i])) {
                tangent_mean[i] += r[i];
                ++ok[i];
            }
    for (std::size_t i = 0; i < n; ++i) {
        valid_fraction[i] = static_cast<double>(ok[i]) / t.rows.size();
        tangent_mean[i] = ok[i] ? tangent_mean[i] / ok[i] : std::nan("");
    }

    auto cmp = sv::compare_models(euclid_mean, tangent_mean, valid_fraction, e.columns,
                                  {min_valid_fraction, tangent_cutoff});

    ensure_outdir(outdir);
    auto paired_path = out_path(outdir, "paired.csv");
    {
        std::ofstream out(paired_path);
        out << "id,euclidean_mean,tangent_mean\n";
        for (std::size_t i = 0; i < cmp.compared_ids.size(); ++i)
            out << cmp.compared_ids[i] << ',' << fmt_double(cmp.euclidean_means[i]) << ','
                << fmt_double(cmp.tangent_means[i]) << '\n';
    }
    auto report_path = out_path(outdir, "report.json");
    {
        json r;
        r["correlation"] = cmp.correlation;
        r["compared"] = cmp.compared_ids.size();
        r["excluded_ids"] = cmp.excluded_ids;
        std::ofstream out(report_path);
        out << r.dump(2) << '\n';
    }

    Manifest man;
    man.command = "compare";
    man.config = {{"euclidean", euclid_path},
                  {"tangent", tangent_path},
                  {"min_valid_fraction", min_valid_fraction},
                  {"tangent_mean_cutoff", tangent_cutoff}};
    man.add_input(euclid_path);
    man.add_input(tangent_path);
    man.add_output(paired_path);
    man.add_output(report_path);
    man.extra["correlation"] = cmp.correlation;
    man.extra["warnings"] = {{"excluded_ids", cmp.excluded_ids}};
    man.write(out_path(outdir, "manifest.json"));
    return 0;
}

// ---------- diagnose ----------

int cmd_diagnose(const std::string& draws_path, bool circular, const std::string& outdir) {
    auto table = read_draws(draws_path);
    auto chains = split_by_chain(table);
    std::vector<std::uint8_t> circ(table.columns.size(), circular ? 1 : 0);
    auto diag = sv::diagnostics(chains, circ);

    ensure_outdir(outdir);
    auto diag_path = out_path(outdir, "diagnostics.csv");
    {
        std::ofstream out(diag_path);
        out << "parameter,ess,split_rhat,degenerate\n";
        for (std::size_t i = 0; i < diag.params.size(); ++i)
            out << table.columns[i] << ',' << fmt_double(diag.params[i].ess) << ','
                << fmt_double(std::isinf(diag.params[i].split_rhat)
                                  ? std::nan("")
                                  : diag.params[i].split_rhat)
                << ',' << (diag.params[i].degenerate ? 1 : 0) << '\n';
    }

    Manifest man;
    man.command = "diagnose";
    man.config = {{"draws", draws_path}, {"circular", circular}};
    man.add_input(draws_path);
    man.add_output(diag_path);
    man.extra["diagnostics"] = diagnostics_json(diag);
    man.write(out_path(outdir, "manifest.json"));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spatialvote: Bayesian spatial-voting ideal point pipeline"};
    app.require_subcommand(1);

    std::string config_path, outdir = ".", votes_path, meta_path, draws_path;
    std::string model, ref1, ref2, euclid_path, tangent_path;
    bool strict = false, no_impute = false, circular_diag = false;
    double epsilon = 1e-3, threshold_low = -1.0, threshold_high = 1.0;
    double min_valid_fraction = 0.5, tangent_cutoff = 50.0;
    std::optional<int> flag_iterations, flag_warmup, flag_burnin, flag_chains, flag_keep;
    std::optional<std::uint64_t> flag_seed;
    std::optional<std::string> flag_link;

    auto* sim = app.add_subcommand("simulate", "generate synthetic roll-call data");
    sim->add_option("--config", config_path, "SynthConfig JSON")->required();
    sim->add_option("--out", outdir, "output directory")->required();
    sim->add_option("--seed", flag_seed, "override seed");

    auto* fit = app.add_subcommand("fit", "fit an ideal-point model");
    fit->add_option("--model", model, "euclidean or circular")->required();
    fit->add_option("--votes", votes_path, "votes CSV")->required();
    fit->add_option("--meta", meta_path, "metadata CSV")->required();
    fit->add_option("--config", config_path, "model config JSON");
    fit->add_option("--out", outdir, "output directory")->required();
    fit->add_option("--iterations", flag_iterations, "override iterations");
    fit->add_option("--warmup", flag_warmup, "override warmup (euclidean)");
    fit->add_option("--burnin", flag_burnin, "override burn-in (circular)");
    fit->add_option("--chains", flag_chains, "override chain count");
    fit->add_option("--keep-every", flag_keep, "override thinning (euclidean)");
    fit->add_option("--seed", flag_seed, "override seed");
    fit->add_option("--link", flag_link, "override link (euclidean)");
    fit->add_flag("--strict", strict, "nonzero exit on convergence warning");
    fit->add_flag("--no-impute", no_impute, "circular: mask missing cells instead of imputing");

    auto* post = app.add_subcommand("postprocess", "align, project, and summarize circular draws");
    post->add_option("--draws", draws_path, "beta angle draws CSV")->required();
    post->add_option("--meta", meta_path, "metadata CSV")->required();
    post->add_option("--ref1", ref1, "rotation reference legislator id")->required();
    post->add_option("--ref2", ref2, "reflection reference legislator id")->required();
    post->add_option("--epsilon", epsilon, "tangent validity window (radians)");
    post->add_option("--threshold-low", threshold_low, "extreme-position lower threshold");
    post->add_option("--threshold-high", threshold_high, "extreme-position upper threshold");
    post->add_option("--out", outdir, "output directory")->required();

    auto* reg = app.add_subcommand("regress", "per-draw logistic regression of the flag");
    reg->add_option("--draws", draws_path, "ideal point draws CSV")->required();
    reg->add_option("--meta", meta_path, "metadata CSV")->required();
    reg->add_option("--out", outdir, "output directory")->required();

    auto* cmp = app.add_subcommand("compare", "cross-model correlation report");
    cmp->add_option("--euclidean", euclid_path, "euclidean beta draws CSV")->required();
    cmp->add_option("--tangent", tangent_path, "circular tangent draws CSV")->required();
    cmp->add_option("--min-valid-fraction", min_valid_fraction, "exclusion threshold");
    cmp->add_option("--tangent-cutoff", tangent_cutoff, "extreme tangent-mean cutoff");
    cmp->add_option("--out", outdir, "output directory")->required();

    auto* diag = app.add_subcommand("diagnose", "R-hat and ESS for a draws file");
    diag->add_option("--draws", draws_path, "draws CSV with chain column")->required();
    diag->add_flag("--circular", circular_diag, "treat parameters as angles");
    diag->add_option("--out", outdir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) {
            json cfg = load_json(config_path);
            if (flag_seed) cfg["seed"] = *flag_seed;
            return cmd_simulate(cfg, outdir);
        }
        if (fit->parsed()) {
            if (model != "euclidean" && model != "circular")
                throw sv::ConfigError("--model must be euclidean or circular, got: " + model);
            json cfg = config_path.empty() ? json::object() : load_json(config_path);
            if (flag_iterations) cfg["iterations"] = *flag_iterations;
            if (flag_warmup) cfg["warmup"] = *flag_warmup;
            if (flag_burnin) cfg["burnin"] = *flag_burnin;
            if (flag_chains) cfg["chains"] = *flag_chains;
            if (flag_keep) cfg["keep_every"] = *flag_keep;
            if (flag_seed) cfg["seed"] = *flag_seed;
            if (flag_link) cfg["link"] = *flag_link;
            if (no_impute) cfg["impute"] = false;

            auto votes = sv::load_votes(votes_path);
            auto meta = sv::load_meta(meta_path);
            meta.require_covers(votes);
            Manifest man;
            man.command = "fit";
            man.config = cfg;
            man.config["model"] = model;
            man.add_input(votes_path);
            man.add_input(meta_path);
            return model == "euclidean"
                       ? cmd_fit_euclidean(cfg, votes, meta, outdir, strict, man)
                       : cmd_fit_circular(cfg, votes, meta, outdir, strict, man);
        }
        if (post->parsed())
            return cmd_postprocess(draws_path, meta_path, ref1, ref2, epsilon, threshold_low,
                                   threshold_high, outdir);
        if (reg->parsed()) return cmd_regress(draws_path, meta_path, outdir);
        if (cmp->parsed())
            return cmd_compare(euclid_path, tangent_path, min_valid_fraction, tangent_cutoff,
                               outdir);
        if (diag->parsed()) return cmd_diagnose(draws_path, circular_diag, outdir);
    } catch (const sv::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const sv::ParseError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const sv::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
