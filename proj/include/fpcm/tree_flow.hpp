// Flow on a tree with a prescribed split-degree sequence.
//
// The process: a root dies at time 0 leaving d_1 children (generation 1).
// While alive vertices remain, the next split happens after an exponential
// wait divided by the alive count; a uniformly random alive vertex dies and
// is replaced by d_i children one generation deeper. After i splits the
// alive count is s_i = d_1 + ... + d_i - (i - 1).
//
// Two routes to the same law are implemented on purpose: the explicit
// process simulation, and the exact product-of-Bernoullis representation
//   G_m = sum_i I_i,  P(I_i = 1) = d_i / s_i  (independent),
//   T_m = sum_i E_i / s_i,  E_i i.i.d. Exp(1),
// where G_m is the generation of a uniform alive pick after m splits and
// T_m the elapsed time. One serves as the oracle for the other.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fpcm/degree_model.hpp"
#include "fpcm/errors.hpp"
#include "fpcm/rng.hpp"

namespace fpcm {

// s_i = d_1 + ... + d_i - (i - 1). Throws DeadProcessError if any s_i < 1
// (the flow has no alive vertex to continue with).
std::vector<long long> s_values(std::span<const long long> degrees);

struct GenerationWeight {
    long long generation = 0;  // G_m
    double weight = 0.0;       // T_m
};

// Exact-law sampler via the independent Bernoulli/exponential representation.
// Consumes, per step, one uniform for the indicator then one for the wait.
GenerationWeight sample_gm_tm(std::span<const long long> degrees, RngStream& rng);

// pmf[k] = P(G_m = k) for k = 0..m, via the one-step recursion
//   P(G_{i+1} = k) = (d_{i+1}/s_{i+1}) P(G_i = k-1)
//                  + (1 - d_{i+1}/s_{i+1}) P(G_i = k).
std::vector<double> exact_generation_pmf(std::span<const long long> degrees);

struct ConstructionResult {
    long long generation = 0;         // generation of a uniform alive pick after the last split
    std::vector<double> split_times;  // T_1 .. T_m
};

// Brute-force process simulation (the oracle for sample_gm_tm).
ConstructionResult simulate_construction(std::span<const long long> degrees, RngStream& rng);

// Same split process, returning only the generation pick and reusing
// `alive` as scratch across calls; used in tight oracle loops.
long long simulate_generation(std::span<const long long> degrees, RngStream& rng,
                              std::vector<std::int32_t>& alive);

struct CoupledGenerations {
    long long exchangeable = 0;  // success probabilities B_i / (B_1+...+B_i)
    long long attached = 0;      // success probabilities B_i / (B_1+...+B_i-(i-1))
};

// Draws B_1..B_m i.i.d. from the size-biased law and forms both generation
// counts with shared uniforms, so exchangeable <= attached pathwise (the
// exchangeable success probability is never larger). E[exchangeable] is
// exactly the harmonic number H_m, whatever the law of B.
CoupledGenerations sample_coupled_generations(const SizeBiasedDistribution& forward,
                                              long long m, RngStream& rng);

}  // namespace fpcm
