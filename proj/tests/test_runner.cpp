#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fpcm/errors.hpp"
#include "fpcm/rng.hpp"
#include "fpcm/runner.hpp"

using namespace fpcm;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::path("runner_test_out") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string masked_csv_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!header) {
            std::size_t pos = line.rfind(',');
            if (pos != std::string::npos) line.erase(pos);  // drop wall-time field
        }
        header = false;
        out << line << '\n';
    }
    return out.str();
}

long long count_data_rows(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    long long rows = -1;  // skip header
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    return rows;
}

std::vector<std::string> split_fields(const std::string& row) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : row) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("config text parsing") {
    std::string text =
        "# comment line\n"
        "dist = pareto(2.5)   # trailing comment\n"
        "n_grid = 500, 1000\n"
        "replicates = 7\n"
        "seed = 123\n"
        "mode = both\n"
        "suite = fpp\n"
        "workers = 2\n"
        "out = some/dir\n"
        "bfs = false\n";
    ExperimentConfig cfg = parse_config_text(text);
    CHECK(cfg.dist.describe() == "pareto(2.5)");
    CHECK(cfg.dist_spec == "pareto(2.5)");
    CHECK(cfg.n_grid == std::vector<long long>{500, 1000});
    CHECK(cfg.replicates == 7);
    CHECK(cfg.master_seed == 123);
    CHECK(cfg.mode == ExperimentConfig::Mode::Both);
    CHECK(cfg.suite == ExperimentConfig::Suite::Fpp);
    CHECK(cfg.workers == 2);
    CHECK(cfg.out_dir == "some/dir");
    CHECK_FALSE(cfg.compute_bfs);
}

TEST_CASE("dist spec grammars") {
    CHECK(parse_config_text("dist = explicit(2:0.5;3:0.5)").dist.describe() ==
          "explicit(2:0.5;3:0.5)");
    CHECK(parse_config_text("dist = {kind: \"pareto\", tau: 4}").dist.describe() ==
          "pareto(4)");
    CHECK(parse_config_text("dist = {kind: \"explicit\", pmf: \"2:0.25;4:0.75\"}")
              .dist.describe() == "explicit(2:0.25;4:0.75)");
    CHECK_THROWS_AS(parse_config_text("dist = gaussian(3)"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("dist = pareto(1.5)"), ConfigError);
}

TEST_CASE("config validation errors") {
    CHECK_THROWS_AS(parse_config_text("replicates = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("n_grid = 1000, 500"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("n_grid = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("workers = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("unknown_key = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("replicates"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("replicates = many"), ConfigError);
    CHECK_THROWS_AS(parse_config_file("no/such/file.cfg"), IoError);
}

TEST_CASE("csv schema and row shapes") {
    CHECK(csv_header() ==
          "n,dist,rep,seed,a_n,ce_n,h1,h2,hn,wn,bfs_dist,r_overshoot,discarded,reason,ms");
    CHECK(csv_schema().size() == 15);

    ReplicateRecord kept;
    kept.n = 100;
    kept.dist = "pareto(4)";
    kept.rep = 3;
    kept.seed = 17;
    kept.a_n_used = 10;
    kept.ce_n = 4;
    kept.h1 = 2;
    kept.h2 = 3;
    kept.hn = 5;
    kept.wn = 1.0 / 3.0;
    kept.bfs_dist = 4;
    kept.ms = 1.25;
    std::vector<std::string> f = split_fields(csv_row(kept));
    REQUIRE(f.size() == 15);
    CHECK(f[0] == "100");
    CHECK(f[9] == "0.33333333333333331");  // 17 significant digits
    CHECK(f[12] == "0");
    CHECK(f[13].empty());
    CHECK(f[14] == "1.250");

    ReplicateRecord gone;
    gone.n = 100;
    gone.dist = "pareto(4)";
    gone.discarded = true;
    gone.reason = "exhausted";
    std::vector<std::string> g = split_fields(csv_row(gone));
    REQUIRE(g.size() == 15);
    CHECK(g[5].empty());   // ce_n
    CHECK(g[8].empty());   // hn
    CHECK(g[9].empty());   // wn
    CHECK(g[10].empty());  // bfs_dist
    CHECK(g[12] == "1");
    CHECK(g[13] == "exhausted");
}

TEST_CASE("csv write/read round trip preserves doubles exactly") {
    fs::path dir = fresh_dir("roundtrip");
    std::vector<ReplicateRecord> records(2);
    records[0].n = 10;
    records[0].dist = "pareto(4)";
    records[0].rep = 0;
    records[0].seed = 0xdeadbeefcafe1234ULL;
    records[0].a_n_used = 4;
    records[0].ce_n = 2;
    records[0].h1 = 1;
    records[0].h2 = 1;
    records[0].hn = 2;
    records[0].wn = 1.0 / 3.0;
    records[0].bfs_dist = 2;
    records[0].ms = 0.5;
    records[1].n = 10;
    records[1].dist = "pareto(4)";
    records[1].rep = 1;
    records[1].seed = 7;
    records[1].discarded = true;
    records[1].reason = "exhausted";

    std::string path = (dir / "t.csv").string();
    write_csv(path, records);
    std::vector<ReplicateRecord> back = read_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].wn == records[0].wn);  // bit-exact via 17 digits
    CHECK(back[0].seed == records[0].seed);
    CHECK(back[0].hn == 2);
    CHECK(back[1].discarded);
    CHECK(back[1].reason == "exhausted");
    CHECK(back[1].ce_n == -1);
    CHECK(std::isnan(back[1].wn));

    CHECK_THROWS_AS(read_csv((dir / "missing.csv").string()), IoError);
}

TEST_CASE("parallel_for is order-stable and propagates exceptions") {
    std::vector<long long> out(100, -1);
    parallel_for(100, 4, [&](long long i) { out[static_cast<std::size_t>(i)] = i * i; });
    for (long long i = 0; i < 100; ++i) CHECK(out[static_cast<std::size_t>(i)] == i * i);

    CHECK_THROWS_AS(parallel_for(50, 4,
                                 [](long long i) {
                                     if (i == 33) throw IoError("boom");
                                 }),
                    IoError);
}

TEST_CASE("fpp replicate invariants in both modes") {
    ExperimentConfig cfg;
    cfg.dist = DegreeDistribution::discrete_pareto(2.5);
    cfg.master_seed = 99;
    for (bool realized : {false, true}) {
        long long kept = 0;
        for (long long rep = 0; rep < 40; ++rep) {
            ReplicateRecord r = run_fpp_replicate(cfg, realized, 150, rep);
            CHECK(r.n == 150);
            CHECK(r.rep == rep);
            CHECK(r.seed == derive_seed(99, 150, static_cast<std::uint64_t>(rep),
                                        realized ? kPurposeRealized : kPurposeProcess));
            if (r.discarded) {
                CHECK_FALSE(r.reason.empty());
                CHECK(r.reason.find(',') == std::string::npos);
                continue;
            }
            ++kept;
            CHECK(r.hn == r.h1 + r.h2);
            CHECK(r.wn > 0.0);
            CHECK(r.a_n_used >= 1);
            REQUIRE(r.bfs_dist >= 1);       // graph distance of distinct vertices
            CHECK(r.bfs_dist <= r.hn);      // BFS minimizes edge count
        }
        CHECK(kept > 20);

        // Bitwise repeatability of a single replicate.
        ReplicateRecord a = run_fpp_replicate(cfg, realized, 150, 5);
        ReplicateRecord b = run_fpp_replicate(cfg, realized, 150, 5);
        CHECK(a.seed == b.seed);
        CHECK(a.hn == b.hn);
        CHECK((std::isnan(a.wn) ? std::isnan(b.wn) : a.wn == b.wn));
        CHECK(a.bfs_dist == b.bfs_dist);
    }
}

TEST_CASE("fpp run: determinism across worker counts and full accounting") {
    ExperimentConfig base;
    base.dist = DegreeDistribution::explicit_pmf({{2, 0.5}, {3, 0.5}});
    base.dist_spec = "explicit(2:0.5;3:0.5)";
    base.n_grid = {60, 120};
    base.replicates = 25;
    base.master_seed = 20260815;
    base.mode = ExperimentConfig::Mode::Both;
    base.suite = ExperimentConfig::Suite::Fpp;
    base.compute_bfs = true;

    ExperimentConfig one = base;
    one.workers = 1;
    one.out_dir = fresh_dir("workers1").string();
    ExperimentConfig four = base;
    four.workers = 4;
    four.out_dir = fresh_dir("workers4").string();

    RunResult r1 = run(one);
    RunResult r4 = run(four);
    CHECK(r1.ok);
    CHECK(r4.ok);
    REQUIRE(r1.csv_files.size() == 2);  // process + realized

    for (const char* name : {"fpp_process.csv", "fpp_realized.csv"}) {
        fs::path p1 = fs::path(one.out_dir) / name;
        fs::path p4 = fs::path(four.out_dir) / name;
        CHECK(masked_csv_bytes(p1) == masked_csv_bytes(p4));
        CHECK(count_data_rows(p1) == 2 * 25);  // kept + discarded = grid x replicates

        std::vector<ReplicateRecord> rows = read_csv(p1.string());
        long long kept = 0, discarded = 0;
        for (const ReplicateRecord& r : rows) (r.discarded ? discarded : kept)++;
        CHECK(kept + discarded == 50);
    }
    for (const std::string& rf : r1.report_files) CHECK(fs::file_size(rf) > 0);
}

TEST_CASE("tree suite writes generation/time rows") {
    ExperimentConfig cfg;
    cfg.dist = DegreeDistribution::discrete_pareto(2.5);
    cfg.dist_spec = "pareto(2.5)";
    cfg.n_grid = {5, 20};  // interpreted as construction sizes m
    cfg.replicates = 30;
    cfg.master_seed = 7;
    cfg.suite = ExperimentConfig::Suite::Tree;
    cfg.out_dir = fresh_dir("tree").string();
    RunResult res = run(cfg);
    CHECK(res.ok);
    REQUIRE(res.csv_files.size() == 1);
    std::vector<ReplicateRecord> rows = read_csv(res.csv_files[0]);
    REQUIRE(rows.size() == 60);
    for (const ReplicateRecord& r : rows) {
        REQUIRE_FALSE(r.discarded);  // min degree 2 keeps the flow alive
        CHECK(r.hn >= 1);
        CHECK(r.hn <= r.n);
        CHECK(r.wn > 0.0);
    }
}

TEST_CASE("limits suite writes limit-law draws") {
    ExperimentConfig cfg;
    cfg.dist = DegreeDistribution::explicit_pmf({{2, 0.5}, {3, 0.5}});
    cfg.dist_spec = "explicit(2:0.5;3:0.5)";
    cfg.n_grid = {2000};  // population cap for the martingale growth
    cfg.replicates = 40;
    cfg.master_seed = 11;
    cfg.suite = ExperimentConfig::Suite::Limits;
    cfg.out_dir = fresh_dir("limits").string();
    RunResult res = run(cfg);
    CHECK(res.ok);
    REQUIRE(res.csv_files.size() == 1);
    std::vector<ReplicateRecord> rows = read_csv(res.csv_files[0]);
    REQUIRE(rows.size() == 40);
    for (const ReplicateRecord& r : rows) {
        REQUIRE_FALSE(r.discarded);
        CHECK(std::isfinite(r.wn));
    }
}

TEST_CASE("report regeneration from an existing csv") {
    ExperimentConfig cfg;
    cfg.dist = DegreeDistribution::explicit_pmf({{2, 0.5}, {3, 0.5}});
    cfg.dist_spec = "explicit(2:0.5;3:0.5)";
    cfg.n_grid = {80};
    cfg.replicates = 30;
    cfg.master_seed = 5;
    cfg.mode = ExperimentConfig::Mode::Process;
    cfg.suite = ExperimentConfig::Suite::Fpp;
    cfg.out_dir = fresh_dir("report").string();
    RunResult first = run(cfg);
    REQUIRE(!first.csv_files.empty());

    ExperimentConfig rcfg = cfg;
    rcfg.out_dir = fresh_dir("report_redo").string();
    RunResult redo = run_report(rcfg, first.csv_files[0]);
    CHECK(redo.ok);
    REQUIRE(!redo.report_files.empty());
    for (const std::string& f : redo.report_files) {
        CHECK(fs::exists(f));
        CHECK(fs::file_size(f) > 0);
    }
}

TEST_CASE("graph export") {
    ExperimentConfig cfg;
    cfg.dist = DegreeDistribution::discrete_pareto(3.5);
    cfg.dist_spec = "pareto(3.5)";
    cfg.n_grid = {50};
    cfg.replicates = 1;
    cfg.master_seed = 3;
    cfg.out_dir = fresh_dir("gen").string();
    RunResult res = run_gen(cfg);
    CHECK(res.ok);
    REQUIRE(res.csv_files.size() == 1);
    std::ifstream in(res.csv_files[0]);
    REQUIRE(in.good());
    std::string line;
    long long edges = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        long long u = -1, v = -1, id = -1;
        ls >> u >> v >> id;
        CHECK(u >= 0);
        CHECK(u < 50);
        CHECK(v >= 0);
        CHECK(v < 50);
        CHECK(id == edges);
        ++edges;
    }
    CHECK(edges >= 50);  // at least n edges with min degree 2
}

TEST_CASE("rng stream behavior") {
    CHECK(derive_seed(1, 2, 3, 4) == derive_seed(1, 2, 3, 4));
    CHECK(derive_seed(1, 2, 3, 4) != derive_seed(1, 2, 3, 5));
    CHECK(derive_seed(1, 2, 3, 4) != derive_seed(1, 2, 4, 4));
    RngStream a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    RngStream r(9);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform01();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
        CHECK(r.exponential() >= 0.0);
        CHECK(r.bounded(17) < 17);
    }
}

}  // TEST_SUITE
