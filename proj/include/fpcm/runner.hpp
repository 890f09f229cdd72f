// Experiment orchestration: config parsing, seeded replicate scheduling
// across a worker pool, CSV emission, and summary reports.
//
// Determinism contract: each replicate derives its own RNG stream from
// (master_seed, n, replicate index, purpose tag) via derive_seed, so output
// is byte-identical for any worker count (the wall-time column aside) and
// independent of scheduling order.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fpcm/degree_model.hpp"
#include "fpcm/stats_harness.hpp"

namespace fpcm {

struct ExperimentConfig {
    enum class Mode { Process, Realized, Both };
    enum class Suite { Fpp, Tree, Limits, ValidateAll };

    DegreeDistribution dist = DegreeDistribution::discrete_pareto(4.0);
    std::string dist_spec = "pareto(4)";
    std::vector<long long> n_grid = {1000};
    long long replicates = 100;
    std::uint64_t master_seed = 20260815;
    Mode mode = Mode::Process;
    Suite suite = Suite::Fpp;
    long long workers = 1;
    std::string out_dir = ".";
    bool compute_bfs = true;
};

// Flat key = value config text; '#' starts a comment. Keys: dist, n_grid,
// replicates, seed, mode, suite, workers, out, bfs. The dist value accepts
// pareto(TAU), explicit(D:P;D:P;...), or {kind: "pareto", tau: TAU} /
// {kind: "explicit", pmf: "D:P;D:P"}.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Throws ConfigError when invariants are violated (replicates >= 1, n_grid
// nonempty/ascending/entries >= 2, workers >= 1).
void validate_config(const ExperimentConfig& cfg);

struct ReplicateRecord {
    long long n = 0;
    std::string dist;
    long long rep = 0;
    std::uint64_t seed = 0;
    long long a_n_used = -1;
    long long ce_n = -1;  // -1 encodes an empty CSV field
    long long h1 = -1;
    long long h2 = -1;
    long long hn = -1;
    double wn = std::numeric_limits<double>::quiet_NaN();  // NaN encodes empty
    long long bfs_dist = -1;
    long long r_overshoot = 0;
    bool discarded = false;
    std::string reason;
    double ms = 0.0;
};

// Fixed CSV schema (header always emitted, floats at 17 significant digits;
// discarded rows carry empty hn/wn and a nonempty reason).
std::vector<std::string> csv_schema();
std::string csv_header();
std::string csv_row(const ReplicateRecord& r);
void write_csv(const std::string& path, const std::vector<ReplicateRecord>& records);
std::vector<ReplicateRecord> read_csv(const std::string& path);

// Purpose tags separating the RNG streams of the different pipelines.
inline constexpr std::uint64_t kPurposeProcess = 1;
inline constexpr std::uint64_t kPurposeRealized = 2;
inline constexpr std::uint64_t kPurposeTree = 3;
inline constexpr std::uint64_t kPurposeLimits = 4;
inline constexpr std::uint64_t kPurposeGen = 5;

// One bilateral FPP replicate (used by run and by the acceptance suite).
ReplicateRecord run_fpp_replicate(const ExperimentConfig& cfg, bool realized, long long n,
                                  long long rep);

// Deterministic parallel map of `count` jobs; fn(i) must only touch its own
// state. Results land in canonical order regardless of worker count.
void parallel_for(long long count, long long workers,
                  const std::function<void(long long)>& fn);

struct RunResult {
    bool ok = true;  // validate-all: all criteria passed; other suites: completed
    std::vector<std::string> csv_files;
    std::vector<std::string> report_files;
};

// Executes the configured suite, writing CSVs and reports into out_dir.
// Per-replicate failures are recorded as discarded rows, never aborting.
RunResult run(const ExperimentConfig& cfg);

// Graph export: one edge-list file per grid n.
RunResult run_gen(const ExperimentConfig& cfg);

// Re-aggregate an existing CSV into report files.
RunResult run_report(const ExperimentConfig& cfg, const std::string& csv_path);

// Distills kept records into per-n samples for the stats layer.
GridSamples collect_grid_samples(const std::vector<ReplicateRecord>& records);

}  // namespace fpcm
