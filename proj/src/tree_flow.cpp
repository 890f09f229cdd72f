#include "fpcm/tree_flow.hpp"

#include <string>

namespace fpcm {

namespace {

// Allocation-free positivity check shared by the samplers.
void validate_flow(std::span<const long long> degrees) {
    if (degrees.empty()) throw EmptyInputError("tree_flow: empty degree vector");
    long long run = 1;  // one alive vertex (the root) before the first split
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < 0) throw InvalidParameterError("tree_flow: negative degree");
        run += degrees[i] - 1;
        if (run < 1) {
            throw DeadProcessError("flow died at split " + std::to_string(i + 1) +
                                   ": alive count " + std::to_string(run));
        }
    }
}

}  // namespace

std::vector<long long> s_values(std::span<const long long> degrees) {
    validate_flow(degrees);
    std::vector<long long> s(degrees.size());
    long long run = 1;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        run += degrees[i] - 1;
        s[i] = run;
    }
    return s;
}

GenerationWeight sample_gm_tm(std::span<const long long> degrees, RngStream& rng) {
    validate_flow(degrees);
    GenerationWeight out;
    long long alive = 1;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        alive += degrees[i] - 1;  // s_i
        const double s_i = static_cast<double>(alive);
        if (rng.bernoulli(static_cast<double>(degrees[i]) / s_i)) ++out.generation;
        out.weight += rng.exponential() / s_i;
    }
    return out;
}

std::vector<double> exact_generation_pmf(std::span<const long long> degrees) {
    const std::vector<long long> s = s_values(degrees);
    const std::size_t m = degrees.size();
    std::vector<double> pmf(m + 1, 0.0);
    pmf[0] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double p = static_cast<double>(degrees[i]) / static_cast<double>(s[i]);
        // In-place downward sweep: new[k] = p * old[k-1] + (1-p) * old[k].
        for (std::size_t k = i + 1; k >= 1; --k) {
            pmf[k] = p * pmf[k - 1] + (1.0 - p) * pmf[k];
        }
        pmf[0] *= 1.0 - p;
    }
    return pmf;
}

namespace {

// Core split loop shared by simulate_construction and simulate_generation:
// alive[j] holds the generation of the j-th alive vertex; a split removes a
// uniform entry (swap-remove) and appends d copies one generation deeper.
// The first split seeds d_1 vertices of generation 1. Returns the generation
// of a uniform alive pick after the final split.
template <typename SplitHook>
long long run_splits(std::span<const long long> degrees, RngStream& rng,
                     std::vector<std::int32_t>& alive, SplitHook&& on_interval) {
    alive.clear();
    alive.insert(alive.end(), static_cast<std::size_t>(degrees[0]), 1);
    for (std::size_t i = 1; i < degrees.size(); ++i) {
        on_interval(alive.size());
        const std::size_t pick = static_cast<std::size_t>(rng.bounded(alive.size()));
        const std::int32_t gen = alive[pick];
        alive[pick] = alive.back();
        alive.pop_back();
        alive.insert(alive.end(), static_cast<std::size_t>(degrees[i]), gen + 1);
    }
    on_interval(alive.size());
    return alive[rng.bounded(alive.size())];
}

}  // namespace

ConstructionResult simulate_construction(std::span<const long long> degrees, RngStream& rng) {
    validate_flow(degrees);
    ConstructionResult out;
    out.split_times.reserve(degrees.size());
    std::vector<std::int32_t> alive;
    double t = 0.0;
    out.generation = run_splits(degrees, rng, alive, [&](std::size_t alive_count) {
        t += rng.exponential() / static_cast<double>(alive_count);
        out.split_times.push_back(t);
    });
    return out;
}

long long simulate_generation(std::span<const long long> degrees, RngStream& rng,
                              std::vector<std::int32_t>& alive) {
    validate_flow(degrees);
    return run_splits(degrees, rng, alive, [](std::size_t) {});
}

CoupledGenerations sample_coupled_generations(const SizeBiasedDistribution& forward,
                                              long long m, RngStream& rng) {
    if (m < 1) throw InvalidParameterError("sample_coupled_generations: m >= 1 required");
    CoupledGenerations out;
    long long sum_b = 0;
    for (long long i = 1; i <= m; ++i) {
        const long long b = forward.sample(rng);
        sum_b += b;
        const double u = rng.uniform01_open();
        const auto bd = static_cast<double>(b);
        if (u * static_cast<double>(sum_b) < bd) ++out.exchangeable;
        if (u * static_cast<double>(sum_b - (i - 1)) < bd) ++out.attached;
    }
    return out;
}

}  // namespace fpcm
