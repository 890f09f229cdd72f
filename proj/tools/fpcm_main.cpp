// Command-line harness for the first-passage-percolation experiment library.
//
// Subcommands:
//   gen       export sampled multigraphs as edge lists
//   tree      tree-flow construction experiments (generation / absorption time)
//   fpp       bilateral shortest-weight-graph runs (process / realized / both)
//   limits    draws from the limit-law samplers
//   validate  full acceptance suite (12 criteria, prints PASS/FAIL per line)
//   report    re-aggregate an existing replicate CSV into summary reports
//
// Exit status: 0 on success (for `validate`: all criteria pass), 1 when any
// selected criterion fails, 2 on configuration or I/O errors.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fpcm/errors.hpp"
#include "fpcm/runner.hpp"

namespace {

struct SharedFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long long workers = 0;
    std::string out_dir;
};

void attach_shared(CLI::App* sub, SharedFlags& f) {
    sub->add_option("--config", f.config_path, "configuration file (key = value lines)")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "master seed override")
        ->each([&f](const std::string&) { f.seed_set = true; });
    sub->add_option("--workers", f.workers, "worker thread count override")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", f.out_dir, "output directory override");
}

fpcm::ExperimentConfig build_config(const SharedFlags& f,
                                    fpcm::ExperimentConfig::Suite suite) {
    fpcm::ExperimentConfig cfg;
    if (!f.config_path.empty()) cfg = fpcm::parse_config_file(f.config_path);
    cfg.suite = suite;
    if (f.seed_set) cfg.master_seed = f.seed;
    if (f.workers > 0) cfg.workers = f.workers;
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    fpcm::validate_config(cfg);
    return cfg;
}

int report_result(const fpcm::RunResult& result) {
    for (const std::string& p : result.csv_files) std::cout << "wrote " << p << '\n';
    for (const std::string& p : result.report_files) std::cout << "wrote " << p << '\n';
    return result.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"first passage percolation on configuration-model random graphs"};
    app.require_subcommand(1);

    SharedFlags gen_f, tree_f, fpp_f, limits_f, validate_f, report_f;
    std::string report_csv;

    CLI::App* gen = app.add_subcommand("gen", "export sampled multigraphs as edge lists");
    attach_shared(gen, gen_f);
    CLI::App* tree = app.add_subcommand("tree", "tree-flow construction experiments");
    attach_shared(tree, tree_f);
    CLI::App* fpp = app.add_subcommand("fpp", "bilateral shortest-weight-graph runs");
    attach_shared(fpp, fpp_f);
    CLI::App* limits = app.add_subcommand("limits", "limit-law sampler draws");
    attach_shared(limits, limits_f);
    CLI::App* validate = app.add_subcommand("validate", "run the acceptance suite");
    attach_shared(validate, validate_f);
    CLI::App* report = app.add_subcommand("report", "re-aggregate an existing replicate CSV");
    attach_shared(report, report_f);
    report->add_option("csv", report_csv, "replicate CSV produced by a previous run")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return report_result(
                fpcm::run_gen(build_config(gen_f, fpcm::ExperimentConfig::Suite::Fpp)));
        if (tree->parsed())
            return report_result(
                fpcm::run(build_config(tree_f, fpcm::ExperimentConfig::Suite::Tree)));
        if (fpp->parsed())
            return report_result(
                fpcm::run(build_config(fpp_f, fpcm::ExperimentConfig::Suite::Fpp)));
        if (limits->parsed())
            return report_result(
                fpcm::run(build_config(limits_f, fpcm::ExperimentConfig::Suite::Limits)));
        if (validate->parsed())
            return report_result(fpcm::run(
                build_config(validate_f, fpcm::ExperimentConfig::Suite::ValidateAll)));
        if (report->parsed())
            return report_result(fpcm::run_report(
                build_config(report_f, fpcm::ExperimentConfig::Suite::Fpp), report_csv));
    } catch (const fpcm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const fpcm::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
