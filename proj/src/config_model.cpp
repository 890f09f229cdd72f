#include "fpcm/config_model.hpp"

#include <ostream>
#include <queue>
#include <string>

namespace fpcm {

namespace {

// Stub machinery below indexes stubs with uint32; keep well clear of wrap.
constexpr long long kMaxStubs = 1LL << 31;

void check_stub_budget(long long total) {
    if (total >= kMaxStubs) {
        throw InvalidParameterError("degree sequence has " + std::to_string(total) +
                                    " stubs; exceeds the supported 2^31 budget");
    }
}

}  // namespace

long long DegreeSequence::stub_total() const {
    long long total = 0;
    for (const long long d : degrees) total += d;
    return total;
}

DegreeSequence sample_degree_sequence(long long n, const DegreeDistribution& dist,
                                      RngStream& rng) {
    if (n < 2) throw InvalidParameterError("sample_degree_sequence: n >= 2 required");
    DegreeSequence seq;
    seq.degrees.resize(static_cast<std::size_t>(n));
    long long total = 0;
    for (auto& d : seq.degrees) {
        d = dist.sample(rng);
        total += d;
    }
    if (total % 2 != 0) {
        ++seq.degrees.back();
        ++total;
        seq.parity_fixed = true;
    }
    check_stub_budget(total);
    return seq;
}

DegreeSequence make_degree_sequence(std::vector<long long> degrees, bool allow_below_two) {
    DegreeSequence seq;
    seq.degrees = std::move(degrees);
    if (seq.degrees.empty()) throw EmptyInputError("make_degree_sequence: empty");
    long long total = 0;
    for (const long long d : seq.degrees) {
        if (d < 0) throw InvalidParameterError("make_degree_sequence: negative degree");
        if (d < 2 && !allow_below_two) {
            throw InvalidParameterError(
                "make_degree_sequence: degree < 2 outside test-only mode");
        }
        total += d;
    }
    if (total % 2 != 0) {
        ++seq.degrees.back();
        ++total;
        seq.parity_fixed = true;
    }
    check_stub_budget(total);
    return seq;
}

MultiGraph build_multigraph(const DegreeSequence& seq, RngStream& rng) {
    const long long total = seq.stub_total();
    if (total % 2 != 0) throw OddStubTotalError("build_multigraph: odd stub total");
    check_stub_budget(total);

    MultiGraph g;
    g.n = seq.size();
    g.stub_offset.resize(seq.degrees.size() + 1);
    g.stub_owner.resize(static_cast<std::size_t>(total));
    std::uint64_t at = 0;
    for (std::size_t v = 0; v < seq.degrees.size(); ++v) {
        g.stub_offset[v] = at;
        for (long long k = 0; k < seq.degrees[v]; ++k) {
            g.stub_owner[at++] = static_cast<std::uint32_t>(v);
        }
    }
    g.stub_offset.back() = at;

    // Uniform matching: shuffle stub ids, pair adjacent positions.
    std::vector<std::uint32_t> perm(static_cast<std::size_t>(total));
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = perm.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(perm[i - 1], perm[j]);
    }

    const std::size_t edges = perm.size() / 2;
    g.stub_pair.resize(perm.size());
    g.stub_edge.resize(perm.size());
    g.edge_from.resize(edges);
    g.edge_to.resize(edges);
    for (std::size_t e = 0; e < edges; ++e) {
        const std::uint32_t a = perm[2 * e];
        const std::uint32_t b = perm[2 * e + 1];
        g.stub_pair[a] = b;
        g.stub_pair[b] = a;
        g.stub_edge[a] = static_cast<std::uint32_t>(e);
        g.stub_edge[b] = static_cast<std::uint32_t>(e);
        g.edge_from[e] = g.stub_owner[a];
        g.edge_to[e] = g.stub_owner[b];
    }
    return g;
}

std::optional<long long> bfs_distance(const MultiGraph& g, long long from, long long to) {
    if (from < 0 || from >= g.n || to < 0 || to >= g.n) {
        throw InvalidParameterError("bfs_distance: vertex out of range");
    }
    if (from == to) return 0;
    std::vector<long long> dist(static_cast<std::size_t>(g.n), -1);
    std::queue<std::uint32_t> frontier;
    dist[static_cast<std::size_t>(from)] = 0;
    frontier.push(static_cast<std::uint32_t>(from));
    while (!frontier.empty()) {
        const std::uint32_t v = frontier.front();
        frontier.pop();
        const long long d = dist[v];
        for (std::uint64_t s = g.stub_offset[v]; s < g.stub_offset[v + 1]; ++s) {
            const std::uint32_t w = g.stub_owner[g.stub_pair[s]];
            if (dist[w] != -1) continue;
            if (w == static_cast<std::uint32_t>(to)) return d + 1;
            dist[w] = d + 1;
            frontier.push(w);
        }
    }
    return std::nullopt;
}

void write_edge_list(const MultiGraph& g, std::ostream& out) {
    for (long long e = 0; e < g.edge_count(); ++e) {
        out << g.edge_from[e] << ' ' << g.edge_to[e] << ' ' << e << '\n';
    }
}

}  // namespace fpcm
