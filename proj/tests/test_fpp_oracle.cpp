#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "doctest.h"
#include "fpcm/config_model.hpp"
#include "fpcm/degree_model.hpp"
#include "fpcm/errors.hpp"
#include "fpcm/fpp_oracle.hpp"
#include "fpcm/rng.hpp"
#include "fpcm/stats_harness.hpp"
#include "test_util.hpp"

using namespace fpcm;

namespace {

WeightedGraph weighted(const MultiGraph& g, std::vector<double> weights) {
    WeightedGraph wg;
    wg.graph = g;
    wg.weights = std::move(weights);
    return wg;
}

// Exhaustive minimal-weight search over vertex-simple paths. With continuous
// weights the optimum is almost surely unique, so hops are comparable too.
void dfs_paths(const WeightedGraph& wg, long long v, long long dst, double acc,
               long long hops, std::vector<bool>& used, double& best_w, long long& best_h) {
    if (acc >= best_w) return;
    if (v == dst) {
        best_w = acc;
        best_h = hops;
        return;
    }
    const MultiGraph& g = wg.graph;
    used[static_cast<std::size_t>(v)] = true;
    for (std::uint64_t s = g.stub_offset[static_cast<std::size_t>(v)];
         s < g.stub_offset[static_cast<std::size_t>(v) + 1]; ++s) {
        std::uint32_t partner = g.stub_pair[s];
        long long w = g.stub_owner[partner];
        if (used[static_cast<std::size_t>(w)]) continue;
        dfs_paths(wg, w, dst, acc + wg.stub_weight(static_cast<std::uint32_t>(s)), hops + 1,
                  used, best_w, best_h);
    }
    used[static_cast<std::size_t>(v)] = false;
}

}  // namespace

TEST_SUITE("fpp_oracle") {

TEST_CASE("edge weights are i.i.d. standard exponentials") {
    DegreeDistribution dist = DegreeDistribution::discrete_pareto(3.5);
    RngStream rng(0xfcc00001);
    DegreeSequence seq = sample_degree_sequence(20000, dist, rng);
    MultiGraph g = build_multigraph(seq, rng);
    long long edges = g.edge_count();
    WeightedGraph wg = assign_weights(std::move(g), rng);
    REQUIRE(static_cast<long long>(wg.weights.size()) == edges);
    for (double w : wg.weights) CHECK(w > 0.0);
    KsResult ks = ks_one_sample(wg.weights,
                                [](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x); });
    INFO("KS = ", ks.statistic, " p = ", ks.p_value);
    CHECK(ks.p_value > 1e-4);
}

TEST_CASE("weights are reproducible for a fixed stream") {
    DegreeSequence seq = make_degree_sequence({3, 2, 3, 2});
    RngStream build_rng(0xfcc00002);
    MultiGraph g = build_multigraph(seq, build_rng);
    RngStream r1(42), r2(42);
    WeightedGraph a = assign_weights(g, r1);
    WeightedGraph b = assign_weights(g, r2);
    CHECK(a.weights == b.weights);
}

TEST_CASE("parallel edges: the lighter one wins") {
    MultiGraph g = fpcm_test::make_graph(2, {{0, 1}, {0, 1}});
    WeightedGraph wg = weighted(g, {0.3, 0.7});
    std::optional<PathResult> res = shortest_path(wg, 0, 1);
    REQUIRE(res.has_value());
    CHECK(res->weight == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(res->hops == 1);

    WeightedGraph wg2 = weighted(g, {0.7, 0.3});
    std::optional<PathResult> res2 = shortest_path(wg2, 0, 1);
    REQUIRE(res2.has_value());
    CHECK(res2->weight == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("self-loops never help") {
    MultiGraph g = fpcm_test::make_graph(2, {{0, 0}, {0, 1}});
    WeightedGraph wg = weighted(g, {0.01, 0.5});
    std::optional<PathResult> res = shortest_path(wg, 0, 1);
    REQUIRE(res.has_value());
    CHECK(res->weight == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(res->hops == 1);
}

TEST_CASE("source equals target") {
    MultiGraph g = fpcm_test::make_graph(2, {{0, 1}});
    WeightedGraph wg = weighted(g, {1.0});
    std::optional<PathResult> res = shortest_path(wg, 1, 1);
    REQUIRE(res.has_value());
    CHECK(res->weight == 0.0);
    CHECK(res->hops == 0);
}

TEST_CASE("unreachable target") {
    MultiGraph g = fpcm_test::make_graph(4, {{0, 1}, {2, 3}});
    WeightedGraph wg = weighted(g, {1.0, 1.0});
    CHECK_FALSE(shortest_path(wg, 0, 3).has_value());
}

TEST_CASE("two-hop detour beats the direct edge") {
    MultiGraph g = fpcm_test::make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    WeightedGraph wg = weighted(g, {0.9, 0.1, 1.5});
    std::optional<PathResult> res = shortest_path(wg, 0, 2);
    REQUIRE(res.has_value());
    CHECK(res->weight == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res->hops == 2);
}

TEST_CASE("agrees with exhaustive path enumeration on small multigraphs") {
    DegreeDistribution dist = DegreeDistribution::explicit_pmf({{2, 0.5}, {3, 0.5}});
    RngStream rng(0xfcc00003);
    for (int trial = 0; trial < 50; ++trial) {
        DegreeSequence seq = sample_degree_sequence(7, dist, rng);
        MultiGraph g = build_multigraph(seq, rng);
        WeightedGraph wg = assign_weights(std::move(g), rng);
        for (long long a = 0; a < wg.graph.n; ++a)
            for (long long b = 0; b < wg.graph.n; ++b) {
                double best_w = std::numeric_limits<double>::infinity();
                long long best_h = -1;
                std::vector<bool> used(static_cast<std::size_t>(wg.graph.n), false);
                dfs_paths(wg, a, b, 0.0, 0, used, best_w, best_h);
                std::optional<PathResult> res = shortest_path(wg, a, b);
                if (best_h < 0) {
                    CHECK_FALSE(res.has_value());
                } else {
                    REQUIRE(res.has_value());
                    CHECK(res->weight == doctest::Approx(best_w).epsilon(1e-12));
                    CHECK(res->hops == best_h);
                }
            }
    }
}

TEST_CASE("triangle inequality over sampled pairs") {
    DegreeDistribution dist = DegreeDistribution::discrete_pareto(2.5);
    RngStream rng(0xfcc00004);
    DegreeSequence seq = sample_degree_sequence(150, dist, rng);
    MultiGraph g = build_multigraph(seq, rng);
    WeightedGraph wg = assign_weights(std::move(g), rng);
    for (int i = 0; i < 60; ++i) {
        long long a = static_cast<long long>(rng.bounded(150));
        long long b = static_cast<long long>(rng.bounded(150));
        long long c = static_cast<long long>(rng.bounded(150));
        std::optional<PathResult> ab = shortest_path(wg, a, b);
        std::optional<PathResult> bc = shortest_path(wg, b, c);
        std::optional<PathResult> ac = shortest_path(wg, a, c);
        if (ab && bc) {
            REQUIRE(ac.has_value());
            CHECK(ac->weight <= ab->weight + bc->weight + 1e-12);
        }
    }
}

}  // TEST_SUITE
