#include "fpcm/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "fpcm/acceptance.hpp"
#include "fpcm/config_model.hpp"
#include "fpcm/errors.hpp"
#include "fpcm/fpp_oracle.hpp"
#include "fpcm/limit_laws.hpp"
#include "fpcm/swg_engine.hpp"
#include "fpcm/tree_flow.hpp"

namespace fs = std::filesystem;

namespace fpcm {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t idx = 0;
        double v = std::stod(s, &idx);
        if (idx != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + s + "' for " + what);
    }
}

long long parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t idx = 0;
        long long v = std::stoll(s, &idx);
        if (idx != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse integer '" + s + "' for " + what);
    }
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    try {
        std::size_t idx = 0;
        std::uint64_t v = std::stoull(s, &idx);
        if (idx != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse unsigned integer '" + s + "' for " + what);
    }
}

std::map<long long, double> parse_pmf_pairs(const std::string& body) {
    std::map<long long, double> pmf;
    for (const std::string& entry : split(body, ';')) {
        std::string e = trim(entry);
        if (e.empty()) continue;
        std::size_t colon = e.find(':');
        if (colon == std::string::npos)
            throw ConfigError("explicit pmf entry '" + e + "' is not degree:probability");
        long long degree = parse_int(trim(e.substr(0, colon)), "pmf degree");
        double prob = parse_double(trim(e.substr(colon + 1)), "pmf probability");
        pmf[degree] = prob;
    }
    if (pmf.empty()) throw ConfigError("explicit pmf is empty");
    return pmf;
}

DegreeDistribution parse_dist(const std::string& raw, std::string* canonical) {
    std::string v = trim(raw);
    if (v.empty()) throw ConfigError("dist value is empty");
    DegreeDistribution dist = DegreeDistribution::discrete_pareto(4.0);
    if (v.front() == '{') {
        if (v.back() != '}') throw ConfigError("dist object is missing the closing '}'");
        std::string kind, tau_text, pmf_text;
        for (const std::string& part : split(v.substr(1, v.size() - 2), ',')) {
            std::string p = trim(part);
            if (p.empty()) continue;
            std::size_t colon = p.find(':');
            if (colon == std::string::npos)
                throw ConfigError("dist object entry '" + p + "' is not key: value");
            std::string key = lower(strip_quotes(trim(p.substr(0, colon))));
            std::string value = strip_quotes(trim(p.substr(colon + 1)));
            if (key == "kind")
                kind = lower(value);
            else if (key == "tau")
                tau_text = value;
            else if (key == "pmf")
                pmf_text = value;
            else
                throw ConfigError("unknown dist object key '" + key + "'");
        }
        if (kind == "pareto") {
            if (tau_text.empty()) throw ConfigError("pareto dist needs a tau entry");
            dist = DegreeDistribution::discrete_pareto(parse_double(tau_text, "tau"));
        } else if (kind == "explicit") {
            if (pmf_text.empty()) throw ConfigError("explicit dist needs a pmf entry");
            dist = DegreeDistribution::explicit_pmf(parse_pmf_pairs(pmf_text));
        } else {
            throw ConfigError("dist kind must be \"pareto\" or \"explicit\", got '" + kind + "'");
        }
    } else {
        std::string lv = lower(v);
        if (lv.rfind("pareto(", 0) == 0 && v.back() == ')') {
            dist = DegreeDistribution::discrete_pareto(
                parse_double(trim(v.substr(7, v.size() - 8)), "tau"));
        } else if (lv.rfind("explicit(", 0) == 0 && v.back() == ')') {
            dist = DegreeDistribution::explicit_pmf(
                parse_pmf_pairs(v.substr(9, v.size() - 10)));
        } else {
            throw ConfigError("unrecognized dist spec '" + v + "'");
        }
    }
    if (canonical) *canonical = dist.describe();
    return dist;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key = lower(trim(line.substr(0, eq)));
        std::string value = trim(line.substr(eq + 1));
        if (key == "dist") {
            try {
                cfg.dist = parse_dist(value, &cfg.dist_spec);
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                // Distribution parameter errors become config errors with line context.
                throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
            }
        } else if (key == "n_grid") {
            cfg.n_grid.clear();
            for (const std::string& tok : split(value, ',')) {
                std::string t = trim(tok);
                if (!t.empty()) cfg.n_grid.push_back(parse_int(t, "n_grid"));
            }
        } else if (key == "replicates") {
            cfg.replicates = parse_int(value, "replicates");
        } else if (key == "seed" || key == "master_seed") {
            cfg.master_seed = parse_u64(value, "seed");
        } else if (key == "mode") {
            std::string m = lower(value);
            if (m == "process")
                cfg.mode = ExperimentConfig::Mode::Process;
            else if (m == "realized")
                cfg.mode = ExperimentConfig::Mode::Realized;
            else if (m == "both")
                cfg.mode = ExperimentConfig::Mode::Both;
            else
                throw ConfigError("mode must be process|realized|both, got '" + value + "'");
        } else if (key == "suite") {
            std::string s = lower(value);
            if (s == "fpp")
                cfg.suite = ExperimentConfig::Suite::Fpp;
            else if (s == "tree")
                cfg.suite = ExperimentConfig::Suite::Tree;
            else if (s == "limits")
                cfg.suite = ExperimentConfig::Suite::Limits;
            else if (s == "validate-all" || s == "validate")
                cfg.suite = ExperimentConfig::Suite::ValidateAll;
            else
                throw ConfigError("suite must be fpp|tree|limits|validate-all, got '" + value +
                                  "'");
        } else if (key == "workers") {
            cfg.workers = parse_int(value, "workers");
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "bfs") {
            std::string b = lower(value);
            if (b == "true" || b == "1" || b == "yes")
                cfg.compute_bfs = true;
            else if (b == "false" || b == "0" || b == "no")
                cfg.compute_bfs = false;
            else
                throw ConfigError("bfs must be true|false, got '" + value + "'");
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    validate_config(cfg);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
    if (cfg.n_grid.empty()) throw ConfigError("n_grid must be nonempty");
    for (long long n : cfg.n_grid)
        if (n < 2) throw ConfigError("n_grid entries must be >= 2");
    for (std::size_t i = 1; i < cfg.n_grid.size(); ++i)
        if (cfg.n_grid[i] <= cfg.n_grid[i - 1])
            throw ConfigError("n_grid must be strictly ascending");
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    if (cfg.out_dir.empty()) throw ConfigError("out directory must be nonempty");
}

// ---------------------------------------------------------------------------
// CSV.

std::vector<std::string> csv_schema() {
    return {"n",  "dist", "rep",      "seed",        "a_n",       "ce_n",   "h1", "h2",
            "hn", "wn",   "bfs_dist", "r_overshoot", "discarded", "reason", "ms"};
}

std::string csv_header() {
    std::string h;
    for (const std::string& c : csv_schema()) {
        if (!h.empty()) h += ',';
        h += c;
    }
    return h;
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string opt_int(long long v) { return v < 0 ? std::string() : std::to_string(v); }

std::string sanitize_reason(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

}  // namespace

std::string csv_row(const ReplicateRecord& r) {
    std::string s;
    s += std::to_string(r.n);
    s += ',';
    s += r.dist;
    s += ',';
    s += std::to_string(r.rep);
    s += ',';
    s += std::to_string(r.seed);
    s += ',';
    s += opt_int(r.a_n_used);
    s += ',';
    s += opt_int(r.ce_n);
    s += ',';
    s += opt_int(r.h1);
    s += ',';
    s += opt_int(r.h2);
    s += ',';
    s += opt_int(r.hn);
    s += ',';
    s += std::isnan(r.wn) ? std::string() : fmt17(r.wn);
    s += ',';
    s += opt_int(r.bfs_dist);
    s += ',';
    s += std::to_string(r.r_overshoot);
    s += ',';
    s += r.discarded ? "1" : "0";
    s += ',';
    s += r.reason;
    s += ',';
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.ms);
    s += ms;
    return s;
}

void write_csv(const std::string& path, const std::vector<ReplicateRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << csv_header() << '\n';
    for (const ReplicateRecord& r : records) out << csv_row(r) << '\n';
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<ReplicateRecord> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header())
        throw IoError("'" + path + "' does not carry the expected CSV header");
    std::vector<ReplicateRecord> records;
    long long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f = split(line, ',');
        if (f.size() != csv_schema().size())
            throw IoError(path + ":" + std::to_string(line_no) + ": wrong field count");
        ReplicateRecord r;
        r.n = parse_int(f[0], "n");
        r.dist = f[1];
        r.rep = parse_int(f[2], "rep");
        r.seed = parse_u64(f[3], "seed");
        r.a_n_used = f[4].empty() ? -1 : parse_int(f[4], "a_n");
        r.ce_n = f[5].empty() ? -1 : parse_int(f[5], "ce_n");
        r.h1 = f[6].empty() ? -1 : parse_int(f[6], "h1");
        r.h2 = f[7].empty() ? -1 : parse_int(f[7], "h2");
        r.hn = f[8].empty() ? -1 : parse_int(f[8], "hn");
        r.wn = f[9].empty() ? std::numeric_limits<double>::quiet_NaN()
                            : parse_double(f[9], "wn");
        r.bfs_dist = f[10].empty() ? -1 : parse_int(f[10], "bfs_dist");
        r.r_overshoot = parse_int(f[11], "r_overshoot");
        r.discarded = f[12] == "1";
        r.reason = f[13];
        r.ms = f[14].empty() ? 0.0 : parse_double(f[14], "ms");
        records.push_back(std::move(r));
    }
    return records;
}

// ---------------------------------------------------------------------------
// Scheduling.

void parallel_for(long long count, long long workers,
                  const std::function<void(long long)>& fn) {
    if (count <= 0) return;
    if (workers <= 1 || count == 1) {
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&]() {
        for (;;) {
            long long i = next.fetch_add(1);
            if (i >= count) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    long long spawn = std::min(workers, count);
    pool.reserve(static_cast<std::size_t>(spawn));
    for (long long w = 0; w < spawn; ++w) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Replicate pipelines.

ReplicateRecord run_fpp_replicate(const ExperimentConfig& cfg, bool realized, long long n,
                                  long long rep) {
    ReplicateRecord rec;
    rec.n = n;
    rec.dist = cfg.dist.describe();
    rec.rep = rep;
    rec.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n),
                           static_cast<std::uint64_t>(rep),
                           realized ? kPurposeRealized : kPurposeProcess);
    auto t0 = std::chrono::steady_clock::now();
    try {
        RngStream rng(rec.seed);
        rec.a_n_used = a_n(cfg.dist, n);
        DegreeSequence seq = sample_degree_sequence(n, cfg.dist, rng);
        long long src1 = static_cast<long long>(rng.bounded(static_cast<std::uint64_t>(n)));
        long long src2 = src1;
        while (src2 == src1)
            src2 = static_cast<long long>(rng.bounded(static_cast<std::uint64_t>(n)));
        BilateralResult res;
        std::optional<long long> bfs;
        if (realized) {
            MultiGraph g = build_multigraph(seq, rng);
            WeightedGraph wg = assign_weights(std::move(g), rng);
            res = grow_bilateral(wg, src1, src2, rec.a_n_used, rng);
            if (!res.discarded && cfg.compute_bfs) bfs = bfs_distance(wg.graph, src1, src2);
        } else {
            StubPool pool(seq);
            res = grow_bilateral(pool, src1, src2, rec.a_n_used, rng);
            if (!res.discarded && cfg.compute_bfs)
                bfs = lazy_bfs_distance(pool, src1, src2, rng);
        }
        rec.r_overshoot = res.r_overshoot;
        if (res.discarded) {
            rec.discarded = true;
            rec.reason = to_string(res.reason);
        } else {
            rec.ce_n = res.ce_n;
            rec.h1 = res.h1;
            rec.h2 = res.h2;
            rec.hn = res.hn;
            rec.wn = res.wn;
            if (bfs) rec.bfs_dist = *bfs;
        }
    } catch (const std::exception& e) {
        rec.discarded = true;
        rec.reason = sanitize_reason(e.what());
    }
    rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                 .count();
    return rec;
}

namespace {

ReplicateRecord run_tree_replicate(const ExperimentConfig& cfg,
                                   const SizeBiasedDistribution& forward, long long m,
                                   long long rep) {
    ReplicateRecord rec;
    rec.n = m;
    rec.dist = cfg.dist.describe();
    rec.rep = rep;
    rec.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(m),
                           static_cast<std::uint64_t>(rep), kPurposeTree);
    auto t0 = std::chrono::steady_clock::now();
    try {
        RngStream rng(rec.seed);
        std::vector<long long> degrees(static_cast<std::size_t>(m));
        degrees[0] = cfg.dist.sample(rng);
        for (long long i = 1; i < m; ++i)
            degrees[static_cast<std::size_t>(i)] = forward.sample(rng);
        ConstructionResult res = simulate_construction(degrees, rng);
        rec.hn = res.generation;
        rec.wn = res.split_times.back();
    } catch (const std::exception& e) {
        rec.discarded = true;
        rec.reason = sanitize_reason(e.what());
    }
    rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                 .count();
    return rec;
}

ReplicateRecord run_limits_replicate(const ExperimentConfig& cfg, const LimitLawSamplers& s,
                                     bool finite_nu, long long n, long long rep) {
    ReplicateRecord rec;
    rec.n = n;
    rec.dist = cfg.dist.describe();
    rec.rep = rep;
    rec.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n),
                           static_cast<std::uint64_t>(rep), kPurposeLimits);
    auto t0 = std::chrono::steady_clock::now();
    try {
        RngStream rng(rec.seed);
        if (finite_nu) {
            rec.wn = sample_V_tau_gt3(s, rng);
        } else {
            XSampleInfo info;
            double x1 = sample_X(s, rng, &info);
            double x2 = sample_X(s, rng, &info);
            rec.wn = x1 + x2;
        }
    } catch (const std::exception& e) {
        rec.discarded = true;
        rec.reason = sanitize_reason(e.what());
    }
    rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                 .count();
    return rec;
}

// ---------------------------------------------------------------------------
// Reports.

std::string fmt_stat(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

void write_report_files(const ExperimentConfig& cfg, const std::string& stem,
                        const std::vector<ReplicateRecord>& records, RunResult& result) {
    GridSamples grid = collect_grid_samples(records);
    std::ostringstream txt;
    std::ostringstream kv;
    txt << "experiment report: " << stem << "\n";
    txt << "dist: " << cfg.dist.describe() << "\n";
    txt << "master_seed: " << cfg.master_seed << "\n";
    txt << "replicates per n: " << cfg.replicates << "\n\n";
    kv << "config.dist=" << cfg.dist.describe() << "\n";
    kv << "config.master_seed=" << cfg.master_seed << "\n";
    kv << "config.replicates=" << cfg.replicates << "\n";

    txt << "per-n summary (kept/discarded, mean/var of hop, mean weight, mean ce/a_n, mean "
           "graph distance):\n";
    for (const GridPointSamples& g : grid) {
        long long kept = static_cast<long long>(std::max(
            {g.hop.size(), g.weight.size(), g.ce_ratio.size(), g.graph_dist.size()}));
        txt << "  n=" << g.n << " kept=" << kept << " discarded=" << g.discarded;
        std::string prefix = "per_n." + std::to_string(g.n);
        kv << prefix << ".kept=" << kept << "\n";
        kv << prefix << ".discarded=" << g.discarded << "\n";
        if (!g.hop.empty()) {
            txt << " mean_hop=" << fmt_stat(sample_mean(g.hop))
                << " var_hop=" << fmt_stat(sample_variance(g.hop));
            kv << prefix << ".mean_hop=" << fmt17(sample_mean(g.hop)) << "\n";
            kv << prefix << ".var_hop=" << fmt17(sample_variance(g.hop)) << "\n";
        }
        if (!g.weight.empty()) {
            txt << " mean_weight=" << fmt_stat(sample_mean(g.weight));
            kv << prefix << ".mean_weight=" << fmt17(sample_mean(g.weight)) << "\n";
            kv << prefix << ".var_weight=" << fmt17(sample_variance(g.weight)) << "\n";
        }
        if (!g.ce_ratio.empty()) {
            txt << " mean_ce_ratio=" << fmt_stat(sample_mean(g.ce_ratio));
            kv << prefix << ".mean_ce_ratio=" << fmt17(sample_mean(g.ce_ratio)) << "\n";
        }
        if (!g.graph_dist.empty()) {
            txt << " mean_graph_dist=" << fmt_stat(sample_mean(g.graph_dist));
            kv << prefix << ".mean_graph_dist=" << fmt17(sample_mean(g.graph_dist)) << "\n";
        }
        txt << "\n";
    }

    bool enough_for_clt = grid.size() >= 2;
    for (const GridPointSamples& g : grid)
        if (g.hop.size() < 100) enough_for_clt = false;
    if (enough_for_clt) {
        try {
            TheoryConstants tc = theory_constants(cfg.dist);
            SummaryStats clt = clt_report(grid, tc);
            txt << "\nhopcount CLT vs log n:\n";
            txt << "  alpha (theory slope): " << fmt_stat(tc.alpha) << "\n";
            txt << "  mean slope: " << fmt_stat(clt.mean_fit.slope) << " +/- "
                << fmt_stat(clt.mean_fit.slope_se) << "\n";
            txt << "  var slope:  " << fmt_stat(clt.var_fit.slope) << " +/- "
                << fmt_stat(clt.var_fit.slope_se) << "\n";
            txt << "  standardized KS at largest n: " << fmt_stat(clt.standardized_hop_ks)
                << "\n";
            kv << "clt.alpha=" << fmt17(tc.alpha) << "\n";
            kv << "clt.mean_slope=" << fmt17(clt.mean_fit.slope) << "\n";
            kv << "clt.mean_slope_se=" << fmt17(clt.mean_fit.slope_se) << "\n";
            kv << "clt.var_slope=" << fmt17(clt.var_fit.slope) << "\n";
            kv << "clt.var_slope_se=" << fmt17(clt.var_fit.slope_se) << "\n";
            kv << "clt.standardized_hop_ks=" << fmt17(clt.standardized_hop_ks) << "\n";
            if (!std::isnan(clt.recentered_weight_mean)) {
                txt << "  recentered weight mean at largest n (mean Wn - gamma log n): "
                    << fmt_stat(clt.recentered_weight_mean) << "\n";
                kv << "clt.recentered_weight_mean=" << fmt17(clt.recentered_weight_mean)
                   << "\n";
            }
        } catch (const Error& e) {
            txt << "\nhopcount CLT summary unavailable: " << e.what() << "\n";
        }
        bool have_bfs = true;
        for (const GridPointSamples& g : grid)
            if (g.graph_dist.empty()) have_bfs = false;
        if (have_bfs) {
            try {
                SummaryStats contrast = distance_contrast(grid, cfg.dist);
                txt << "\ngraph-distance contrast:\n";
                txt << "  normalized graph distance at largest n: "
                    << fmt_stat(contrast.graph_distance_coefficient)
                    << " (reference " << fmt_stat(contrast.graph_distance_reference) << ")\n";
                txt << "  hop/graph ratio trend: " << to_string(contrast.ratio_trend) << "\n";
                kv << "contrast.coefficient=" << fmt17(contrast.graph_distance_coefficient)
                   << "\n";
                kv << "contrast.reference=" << fmt17(contrast.graph_distance_reference) << "\n";
                kv << "contrast.ratio_trend=" << to_string(contrast.ratio_trend) << "\n";
            } catch (const Error& e) {
                txt << "\ngraph-distance contrast unavailable: " << e.what() << "\n";
            }
        }
    }

    std::string txt_path = (fs::path(cfg.out_dir) / (stem + "_report.txt")).string();
    std::string kv_path = (fs::path(cfg.out_dir) / (stem + "_report.kv")).string();
    write_text_file(txt_path, txt.str());
    write_text_file(kv_path, kv.str());
    result.report_files.push_back(txt_path);
    result.report_files.push_back(kv_path);
}

std::vector<ReplicateRecord> schedule(const ExperimentConfig& cfg,
                                      const std::function<ReplicateRecord(long long, long long)>&
                                          one) {
    std::vector<long long> ns;
    std::vector<long long> reps;
    for (long long n : cfg.n_grid)
        for (long long r = 0; r < cfg.replicates; ++r) {
            ns.push_back(n);
            reps.push_back(r);
        }
    std::vector<ReplicateRecord> records(ns.size());
    parallel_for(static_cast<long long>(ns.size()), cfg.workers, [&](long long i) {
        records[static_cast<std::size_t>(i)] =
            one(ns[static_cast<std::size_t>(i)], reps[static_cast<std::size_t>(i)]);
    });
    return records;
}

}  // namespace

GridSamples collect_grid_samples(const std::vector<ReplicateRecord>& records) {
    std::map<long long, GridPointSamples> by_n;
    for (const ReplicateRecord& r : records) {
        GridPointSamples& g = by_n[r.n];
        g.n = r.n;
        if (r.discarded) {
            ++g.discarded;
            continue;
        }
        if (r.hn >= 0) g.hop.push_back(static_cast<double>(r.hn));
        if (!std::isnan(r.wn)) g.weight.push_back(r.wn);
        if (r.ce_n >= 0 && r.a_n_used > 0)
            g.ce_ratio.push_back(static_cast<double>(r.ce_n) /
                                 static_cast<double>(r.a_n_used));
        if (r.bfs_dist >= 0) g.graph_dist.push_back(static_cast<double>(r.bfs_dist));
    }
    GridSamples grid;
    for (auto& [n, g] : by_n) grid.push_back(std::move(g));
    return grid;
}

RunResult run(const ExperimentConfig& cfg) {
    validate_config(cfg);
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "'");

    RunResult result;
    switch (cfg.suite) {
        case ExperimentConfig::Suite::Fpp: {
            std::vector<bool> modes;
            if (cfg.mode == ExperimentConfig::Mode::Process ||
                cfg.mode == ExperimentConfig::Mode::Both)
                modes.push_back(false);
            if (cfg.mode == ExperimentConfig::Mode::Realized ||
                cfg.mode == ExperimentConfig::Mode::Both)
                modes.push_back(true);
            for (bool realized : modes) {
                std::vector<ReplicateRecord> records =
                    schedule(cfg, [&](long long n, long long rep) {
                        return run_fpp_replicate(cfg, realized, n, rep);
                    });
                std::string stem = realized ? "fpp_realized" : "fpp_process";
                std::string path = (fs::path(cfg.out_dir) / (stem + ".csv")).string();
                write_csv(path, records);
                result.csv_files.push_back(path);
                write_report_files(cfg, stem, records, result);
            }
            break;
        }
        case ExperimentConfig::Suite::Tree: {
            SizeBiasedDistribution forward(cfg.dist);
            std::vector<ReplicateRecord> records =
                schedule(cfg, [&](long long n, long long rep) {
                    return run_tree_replicate(cfg, forward, n, rep);
                });
            std::string path = (fs::path(cfg.out_dir) / "tree.csv").string();
            write_csv(path, records);
            result.csv_files.push_back(path);
            write_report_files(cfg, "tree", records, result);
            break;
        }
        case ExperimentConfig::Suite::Limits: {
            LimitLawSamplers samplers(cfg.dist);
            bool finite_nu = cfg.dist.has_finite_forward_mean();
            std::vector<ReplicateRecord> records =
                schedule(cfg, [&](long long n, long long rep) {
                    return run_limits_replicate(cfg, samplers, finite_nu, n, rep);
                });
            std::string path = (fs::path(cfg.out_dir) / "limits.csv").string();
            write_csv(path, records);
            result.csv_files.push_back(path);
            write_report_files(cfg, "limits", records, result);
            break;
        }
        case ExperimentConfig::Suite::ValidateAll: {
            std::vector<CriterionResult> criteria = run_acceptance_suite(cfg);
            std::ostringstream txt, kv;
            bool all_pass = true;
            txt << "acceptance criteria (master_seed=" << cfg.master_seed << ")\n";
            for (const CriterionResult& c : criteria) {
                all_pass = all_pass && c.pass;
                txt << (c.pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << " -- "
                    << c.detail << "\n";
                kv << "criterion." << c.id << ".pass=" << (c.pass ? 1 : 0) << "\n";
                kv << "criterion." << c.id << ".detail=" << c.detail << "\n";
            }
            txt << (all_pass ? "ALL CRITERIA PASSED\n" : "SOME CRITERIA FAILED\n");
            kv << "all_pass=" << (all_pass ? 1 : 0) << "\n";
            std::string txt_path =
                (fs::path(cfg.out_dir) / "acceptance_report.txt").string();
            std::string kv_path = (fs::path(cfg.out_dir) / "acceptance_report.kv").string();
            write_text_file(txt_path, txt.str());
            write_text_file(kv_path, kv.str());
            result.report_files.push_back(txt_path);
            result.report_files.push_back(kv_path);
            result.ok = all_pass;
            break;
        }
    }
    return result;
}

RunResult run_gen(const ExperimentConfig& cfg) {
    validate_config(cfg);
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "'");
    RunResult result;
    for (long long n : cfg.n_grid) {
        RngStream rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n), 0,
                                  kPurposeGen));
        DegreeSequence seq = sample_degree_sequence(n, cfg.dist, rng);
        MultiGraph g = build_multigraph(seq, rng);
        std::string path =
            (fs::path(cfg.out_dir) / ("graph_n" + std::to_string(n) + ".edges")).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open '" + path + "' for writing");
        write_edge_list(g, out);
        out.flush();
        if (!out) throw IoError("failed writing '" + path + "'");
        result.csv_files.push_back(path);
    }
    return result;
}

RunResult run_report(const ExperimentConfig& cfg, const std::string& csv_path) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "'");
    std::vector<ReplicateRecord> records = read_csv(csv_path);
    RunResult result;
    std::string stem = fs::path(csv_path).stem().string();
    write_report_files(cfg, stem, records, result);
    return result;
}

}  // namespace fpcm
