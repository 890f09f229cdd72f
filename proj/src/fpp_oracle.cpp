#include "fpcm/fpp_oracle.hpp"

#include <queue>

namespace fpcm {

WeightedGraph assign_weights(MultiGraph graph, RngStream& rng) {
    WeightedGraph wg;
    wg.graph = std::move(graph);
    wg.weights.resize(static_cast<std::size_t>(wg.graph.edge_count()));
    for (auto& w : wg.weights) w = rng.exponential();
    return wg;
}

namespace {

struct QueueEntry {
    double dist;
    long long hops;
    std::uint32_t pred;
    std::uint32_t vertex;
    bool operator>(const QueueEntry& o) const {
        if (dist != o.dist) return dist > o.dist;
        if (hops != o.hops) return hops > o.hops;
        return pred > o.pred;
    }
};

}  // namespace

std::optional<PathResult> shortest_path(const WeightedGraph& wg, long long src, long long dst) {
    const MultiGraph& g = wg.graph;
    if (src < 0 || src >= g.n || dst < 0 || dst >= g.n) {
        throw InvalidParameterError("shortest_path: vertex out of range");
    }
    if (src == dst) return PathResult{0.0, 0};

    std::vector<char> settled(static_cast<std::size_t>(g.n), 0);
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;
    queue.push({0.0, 0, static_cast<std::uint32_t>(src), static_cast<std::uint32_t>(src)});
    while (!queue.empty()) {
        const QueueEntry top = queue.top();
        queue.pop();
        if (settled[top.vertex]) continue;
        settled[top.vertex] = 1;
        if (top.vertex == static_cast<std::uint32_t>(dst)) {
            return PathResult{top.dist, top.hops};
        }
        for (std::uint64_t s = g.stub_offset[top.vertex]; s < g.stub_offset[top.vertex + 1]; ++s) {
            const std::uint32_t w = g.stub_owner[g.stub_pair[s]];
            if (settled[w]) continue;
            queue.push({top.dist + wg.stub_weight(static_cast<std::uint32_t>(s)),
                        top.hops + 1, top.vertex, w});
        }
    }
    return std::nullopt;
}

}  // namespace fpcm
