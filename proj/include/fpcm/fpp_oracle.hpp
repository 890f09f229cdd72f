// Ground truth for first-passage queries: i.i.d. Exp(1) edge weights on a
// realized multigraph and a textbook priority-queue shortest path.
#pragma once

#include <optional>
#include <vector>

#include "fpcm/config_model.hpp"
#include "fpcm/rng.hpp"

namespace fpcm {

struct WeightedGraph {
    MultiGraph graph;
    std::vector<double> weights;  // one Exp(1) weight per edge id

    double stub_weight(std::uint32_t stub) const {
        return weights[graph.stub_edge[stub]];
    }
};

// One weight per edge id, in edge-id order (one rng draw per edge).
WeightedGraph assign_weights(MultiGraph graph, RngStream& rng);

struct PathResult {
    double weight = 0.0;
    long long hops = 0;
};

// Minimal total weight and the hop count of the minimal-weight path.
// Ties (measure zero under continuous weights) break deterministically by
// fewer hops, then smaller predecessor id. Self-loops never help (weights
// are positive); nullopt when unreachable.
std::optional<PathResult> shortest_path(const WeightedGraph& wg, long long src, long long dst);

}  // namespace fpcm
