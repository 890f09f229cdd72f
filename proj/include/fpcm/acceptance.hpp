// The acceptance suite: twelve end-to-end statistical checks that exercise
// the whole library at pinned parameters and pre-registered tolerances.
// Each criterion is a self-contained experiment deriving its own RNG streams
// from the master seed, so criteria can run individually or together with
// identical results.
#pragma once

#include <string>
#include <vector>

#include "fpcm/runner.hpp"

namespace fpcm {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // measured statistics vs tolerances
};

// Runs the selected criteria (ids 1..12; empty = all), printing one PASS/FAIL
// line per criterion to stdout as it completes. Uses cfg.master_seed,
// cfg.workers, and cfg.out_dir (scratch space for the determinism check).
std::vector<CriterionResult> run_acceptance_suite(const ExperimentConfig& cfg,
                                                  const std::vector<int>& only = {});

}  // namespace fpcm
