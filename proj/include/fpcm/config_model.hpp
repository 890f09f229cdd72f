// Configuration-model multigraphs: i.i.d. degrees, uniform stub matching.
//
// Every vertex of degree d contributes d stubs (half-edges); a uniformly
// random perfect matching on the stubs defines the multigraph. Self-loops
// and multi-edges are kept. Stubs are numbered contiguously per vertex, so
// stub ids [offset[v], offset[v+1]) belong to vertex v.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fpcm/degree_model.hpp"
#include "fpcm/errors.hpp"
#include "fpcm/rng.hpp"

namespace fpcm {

struct DegreeSequence {
    std::vector<long long> degrees;
    bool parity_fixed = false;  // last entry was incremented to even the stub total

    long long size() const { return static_cast<long long>(degrees.size()); }
    long long stub_total() const;
};

// i.i.d. draws from dist; if the stub total is odd the last entry gets one
// extra stub and parity_fixed is set.
DegreeSequence sample_degree_sequence(long long n, const DegreeDistribution& dist,
                                      RngStream& rng);

// Wraps an explicit degree vector (applying the same parity fix). Entries
// below 2 require allow_below_two — that escape hatch exists for tiny
// hand-built test graphs only.
DegreeSequence make_degree_sequence(std::vector<long long> degrees,
                                    bool allow_below_two = false);

struct MultiGraph {
    long long n = 0;
    std::vector<std::uint64_t> stub_offset;  // size n+1; stubs of v = [offset[v], offset[v+1])
    std::vector<std::uint32_t> stub_owner;   // stub -> vertex
    std::vector<std::uint32_t> stub_pair;    // fixed-point-free involution on stubs
    // Edge k joins stub_owner[perm[2k]] and stub_owner[perm[2k+1]]; endpoints
    // recorded explicitly for weight assignment and export.
    std::vector<std::uint32_t> edge_from, edge_to;
    std::vector<std::uint32_t> stub_edge;    // stub -> incident edge id

    long long stub_count() const { return static_cast<long long>(stub_owner.size()); }
    long long edge_count() const { return static_cast<long long>(edge_from.size()); }
    long long degree(long long v) const {
        return static_cast<long long>(stub_offset[v + 1] - stub_offset[v]);
    }
};

// Fisher-Yates shuffle of the stub array, pairing consecutive positions:
// exactly the uniform matching law. Throws OddStubTotalError on odd totals.
MultiGraph build_multigraph(const DegreeSequence& seq, RngStream& rng);

// Minimum edge count between two vertices; nullopt when unreachable.
// Self-loops never shorten paths (they leave the BFS frontier unchanged).
std::optional<long long> bfs_distance(const MultiGraph& g, long long from, long long to);

// One line per edge: "u v edge_id" (self-loops as "u u id").
void write_edge_list(const MultiGraph& g, std::ostream& out);

}  // namespace fpcm
