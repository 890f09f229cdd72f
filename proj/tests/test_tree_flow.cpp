#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "doctest.h"
#include "fpcm/degree_model.hpp"
#include "fpcm/errors.hpp"
#include "fpcm/rng.hpp"
#include "fpcm/tree_flow.hpp"
#include "test_util.hpp"

using namespace fpcm;

namespace {

// Independent oracle for the generation pmf: enumerate all 2^m indicator
// patterns of the representation G = sum_i Bernoulli(d_i / s_i).
std::vector<double> brute_force_pmf(const std::vector<long long>& degrees) {
    std::vector<long long> s = s_values(degrees);
    const std::size_t m = degrees.size();
    std::vector<double> pmf(m + 1, 0.0);
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
        double prob = 1.0;
        long long gen = 0;
        for (std::size_t i = 0; i < m; ++i) {
            double p = static_cast<double>(degrees[i]) / static_cast<double>(s[i]);
            if (mask & (1ULL << i)) {
                prob *= p;
                ++gen;
            } else {
                prob *= 1.0 - p;
            }
        }
        pmf[static_cast<std::size_t>(gen)] += prob;
    }
    return pmf;
}

// All split-degree vectors over {0,2,3} of length <= max_len that keep at
// least one vertex alive throughout.
void enumerate_vectors(std::vector<std::vector<long long>>& out, std::vector<long long>& cur,
                       long long alive, std::size_t max_len) {
    if (cur.size() == max_len) return;
    for (long long d : {0LL, 2LL, 3LL}) {
        long long next = alive + d - 1;
        if (next < 1) continue;
        cur.push_back(d);
        out.push_back(cur);
        enumerate_vectors(out, cur, next, max_len);
        cur.pop_back();
    }
}

}  // namespace

TEST_SUITE("tree_flow") {

TEST_CASE("s_values") {
    std::vector<long long> d1 = {3, 2, 2};
    CHECK(s_values(d1) == std::vector<long long>{3, 4, 5});
    std::vector<long long> d2 = {2, 2};
    CHECK(s_values(d2) == std::vector<long long>{2, 3});
    std::vector<long long> d3 = {3, 0, 0, 2};  // dips to one alive vertex, survives
    CHECK(s_values(d3) == std::vector<long long>{3, 2, 1, 2});

    std::vector<long long> dead1 = {0};
    CHECK_THROWS_AS(s_values(dead1), DeadProcessError);
    std::vector<long long> dead2 = {2, 0, 0, 0};
    CHECK_THROWS_AS(s_values(dead2), DeadProcessError);
}

TEST_CASE("exact generation pmf: hand values") {
    std::vector<long long> d22 = {2, 2};
    // I1 = Bernoulli(2/2) = 1 surely, I2 = Bernoulli(2/3).
    std::vector<double> pmf22 = exact_generation_pmf(d22);
    REQUIRE(pmf22.size() == 3);
    CHECK(pmf22[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(pmf22[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(pmf22[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    std::vector<long long> d322 = {3, 2, 2};
    // I1 = 1 surely, I2 = Bernoulli(1/2), I3 = Bernoulli(2/5).
    std::vector<double> pmf322 = exact_generation_pmf(d322);
    REQUIRE(pmf322.size() == 4);
    CHECK(pmf322[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(pmf322[1] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(pmf322[2] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(pmf322[3] == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("exact generation pmf equals brute-force indicator enumeration") {
    std::vector<std::vector<long long>> vecs;
    std::vector<long long> cur;
    enumerate_vectors(vecs, cur, 1, 6);
    for (const std::vector<long long>& d : vecs) {
        std::vector<double> fast = exact_generation_pmf(d);
        std::vector<double> slow = brute_force_pmf(d);
        REQUIRE(fast.size() == slow.size());
        double norm = 0.0;
        for (std::size_t k = 0; k < fast.size(); ++k) {
            CHECK(fast[k] == doctest::Approx(slow[k]).epsilon(1e-13));
            norm += fast[k];
        }
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("process simulation matches the exact law: [2,2] at one million runs") {
    std::vector<long long> d = {2, 2};
    RngStream rng(0x7ee50001);
    constexpr long long kRuns = 1000000;
    std::vector<std::int32_t> alive;
    long long gen2 = 0;
    for (long long i = 0; i < kRuns; ++i)
        if (simulate_generation(d, rng, alive) == 2) ++gen2;
    CHECK(std::fabs(fpcm_test::binomial_z(gen2, kRuns, 2.0 / 3.0)) < 3.0);
}

TEST_CASE("process simulation matches the exact law: [3,2,2,2,2] chi-square") {
    std::vector<long long> d = {3, 2, 2, 2, 2};
    RngStream rng(0x7ee50002);
    constexpr long long kRuns = 1000000;
    std::vector<double> pmf = exact_generation_pmf(d);
    std::vector<std::int32_t> alive;
    std::map<long long, long long> counts;
    for (long long i = 0; i < kRuns; ++i) ++counts[simulate_generation(d, rng, alive)];
    std::map<long long, double> probs;
    for (std::size_t k = 0; k < pmf.size(); ++k)
        probs[static_cast<long long>(k)] = pmf[k];
    ChiSquareResult cs = fpcm_test::pooled_chi_square(counts, probs, kRuns);
    INFO("chi2 = ", cs.statistic, " dof = ", cs.dof, " p = ", cs.p_value);
    CHECK(cs.p_value > 1e-4);
}

TEST_CASE("absorption time: E[T_3] = 47/60 for [3,2,2]") {
    std::vector<long long> d = {3, 2, 2};
    RngStream rng(0x7ee50003);
    constexpr long long kRuns = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (long long i = 0; i < kRuns; ++i) {
        ConstructionResult res = simulate_construction(d, rng);
        REQUIRE(res.split_times.size() == 3);
        CHECK(res.split_times[0] < res.split_times[1]);
        CHECK(res.split_times[1] < res.split_times[2]);
        double t = res.split_times.back();
        sum += t;
        sumsq += t * t;
    }
    double mean = sum / kRuns;
    double se = std::sqrt((sumsq - sum * sum / kRuns) / (kRuns - 1) / kRuns);
    CHECK(std::fabs(mean - 47.0 / 60.0) < 4.0 * se);
}

TEST_CASE("closed-form sampler agrees with process simulation in first moments") {
    std::vector<long long> d = {3, 2, 0, 3, 2};
    std::vector<long long> s = s_values(d);
    double eg = 0.0, et = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        eg += static_cast<double>(d[i]) / static_cast<double>(s[i]);
        et += 1.0 / static_cast<double>(s[i]);
    }
    RngStream rng(0x7ee50004);
    constexpr long long kRuns = 200000;
    double g_sum = 0.0, g_sq = 0.0, t_sum = 0.0, t_sq = 0.0;
    for (long long i = 0; i < kRuns; ++i) {
        GenerationWeight gw = sample_gm_tm(d, rng);
        CHECK(gw.generation >= 0);
        CHECK(gw.generation <= static_cast<long long>(d.size()));
        g_sum += static_cast<double>(gw.generation);
        g_sq += static_cast<double>(gw.generation) * static_cast<double>(gw.generation);
        t_sum += gw.weight;
        t_sq += gw.weight * gw.weight;
    }
    double g_se = std::sqrt((g_sq - g_sum * g_sum / kRuns) / (kRuns - 1) / kRuns);
    double t_se = std::sqrt((t_sq - t_sum * t_sum / kRuns) / (kRuns - 1) / kRuns);
    CHECK(std::fabs(g_sum / kRuns - eg) < 4.0 * g_se);
    CHECK(std::fabs(t_sum / kRuns - et) < 4.0 * t_se);
}

TEST_CASE("coupled generations: pathwise order and harmonic mean") {
    SizeBiasedDistribution forward(DegreeDistribution::discrete_pareto(2.5));
    RngStream rng(0x7ee50005);
    constexpr long long kM = 30;
    constexpr long long kRuns = 100000;
    double h30 = 0.0;
    for (long long i = 1; i <= kM; ++i) h30 += 1.0 / static_cast<double>(i);
    double sum = 0.0, sumsq = 0.0;
    for (long long i = 0; i < kRuns; ++i) {
        CoupledGenerations cg = sample_coupled_generations(forward, kM, rng);
        CHECK(cg.exchangeable <= cg.attached);
        CHECK(cg.exchangeable >= 1);
        CHECK(cg.attached <= kM);
        double g = static_cast<double>(cg.exchangeable);
        sum += g;
        sumsq += g * g;
    }
    double mean = sum / kRuns;
    double se = std::sqrt((sumsq - sum * sum / kRuns) / (kRuns - 1) / kRuns);
    // E[exchangeable] = H_m exactly, whatever the forward law.
    CHECK(std::fabs(mean - h30) < 4.0 * se);

    CoupledGenerations one = sample_coupled_generations(forward, 1, rng);
    CHECK(one.exchangeable == 1);
    CHECK(one.attached == 1);
}

}  // TEST_SUITE
