// Shortest-weight-graph growth on configuration models.
//
// The SWG grows from a source one pairing event at a time. At each step a
// uniformly random allowed stub is chosen (memorylessness makes the minimal
// residual-weight stub uniform), and one of three things happens:
//   case 1: the chosen stub pairs to a stub of a fresh vertex, which joins
//           with forward degree B = degree - 1;
//   case 2: the chosen stub pairs to an allowed stub of the SWG itself (a
//           cycle closes); the paired stub is replaced by an artificial stub
//           so the process stays tree-like, and B = 0;
//   case 3: the chosen stub is artificial; it is removed, B = 0.
// The allowed-stub count satisfies S_m = S_{m-1} + B_m - 1.
//
// Two growth contexts are supported:
//   - process mode (StubPool): the matching is revealed lazily while the SWG
//     grows, exactly the annealed construction; step times are Exp(1)/S_m
//     increments and no per-edge weights exist;
//   - realized mode (WeightedGraph): the multigraph and its Exp(1) weights
//     are fixed first and growth follows actual minimal tentative weights,
//     enabling the per-realization shortest-path oracle. Artificial stubs are
//     emulated (death time = creation time + fresh Exp(1)) so the step-count
//     law matches process mode.
//
// Bilateral growth: SWG1 grows a_n steps from the first source, then SWG2
// grows from the second until one of its chosen stubs pairs to an allowed
// stub of SWG1 (the connecting edge, step index CE_n). In realized mode the
// priority of a frontier edge crossing into SWG1 is discounted by the part
// of its weight SWG1 has already "paid" (r1 - dist1 of the far endpoint,
// provably nonnegative), which makes the first meet exactly the minimal
// weight path; the recorded Wn = T1 + T2 then equals the Dijkstra distance.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "fpcm/config_model.hpp"
#include "fpcm/fpp_oracle.hpp"
#include "fpcm/rng.hpp"

namespace fpcm {

inline constexpr std::uint32_t kNoStub = 0xffffffffu;

// Lazy uniform pairing over the stubs of a degree sequence (process mode).
// Pairings are revealed on demand; by deferred decisions the union of
// reveals from SWG growth and BFS queries is one uniform matching.
class StubPool {
  public:
    explicit StubPool(const DegreeSequence& seq);

    long long vertex_count() const { return n_; }
    long long stub_count() const { return static_cast<long long>(offset_[n_]); }
    long long free_count() const { return static_cast<long long>(free_list_.size()); }
    std::uint64_t stubs_begin(long long v) const { return offset_[v]; }
    std::uint64_t stubs_end(long long v) const { return offset_[v + 1]; }
    long long degree(long long v) const {
        return static_cast<long long>(offset_[v + 1] - offset_[v]);
    }
    std::uint32_t owner(std::uint32_t stub) const { return owner_[stub]; }
    bool is_paired(std::uint32_t stub) const { return pair_[stub] != kNoStub; }
    std::uint32_t partner(std::uint32_t stub) const { return pair_[stub]; }

    // Pairs `stub` (must be free) to a uniformly random other free stub and
    // returns it. The free count is always even, so a partner exists.
    std::uint32_t pair_uniform(std::uint32_t stub, RngStream& rng);

    // Partner of `stub`, pairing it lazily if still free.
    std::uint32_t reveal(std::uint32_t stub, RngStream& rng);

  private:
    void remove_free(std::uint32_t stub);

    long long n_ = 0;
    std::vector<std::uint64_t> offset_;
    std::vector<std::uint32_t> owner_;
    std::vector<std::uint32_t> pair_;      // kNoStub while free
    std::vector<std::uint32_t> free_list_;
    std::vector<std::uint32_t> free_pos_;  // stub -> position in free_list_
};

struct SwgVertexRecord {
    std::uint32_t vertex = 0;
    std::int32_t hop = 0;  // tree hop distance from the source
    double time = 0.0;     // T at the step the vertex joined
};

struct SwgState {
    long long source = -1;
    long long steps = 0;           // pairing/choose events executed
    bool exhausted = false;        // ran out of allowed stubs before `steps`
    long long allowed_count = 0;   // S after the last step (real + artificial)
    long long artificial_count = 0;
    double time = 0.0;             // T after the last step
    // b_sequence[0] is the source degree; b_sequence[k] is B at step k.
    // Replaying it through tree_flow::s_values reproduces S after each step.
    std::vector<long long> b_sequence;
    // r_steps[m-1] = first step index at which the SWG holds m+1 real vertices.
    std::vector<long long> r_steps;
    // added[0] is the source itself (hop 0, time 0).
    std::vector<SwgVertexRecord> added;
};

// Process mode: `steps` growth events against the lazy pool.
SwgState grow_single(StubPool& pool, long long source, long long steps, RngStream& rng);
// Realized mode: same bookkeeping on a fixed weighted multigraph.
SwgState grow_single(const WeightedGraph& wg, long long source, long long steps, RngStream& rng);

enum class DiscardReason { None, Exhausted, NotConnected };
const char* to_string(DiscardReason reason);

struct BilateralResult {
    long long a_n_used = 0;
    // Step index of SWG2's connecting step; 0 means the second source was
    // already inside SWG1 (containment), reported but not discarded.
    long long ce_n = -1;
    long long h1 = -1;  // hops from source 1 to its endpoint of the connecting edge
    long long h2 = -1;  // hops from source 2, counting the connecting edge
    long long hn = -1;  // h1 + h2
    double wn = std::numeric_limits<double>::quiet_NaN();
    long long collision_vertex = -1;  // SWG1 endpoint of the connecting edge
    bool discarded = false;
    DiscardReason reason = DiscardReason::None;
    long long r_overshoot = 0;  // case-2 + case-3 events across both phases
};

BilateralResult grow_bilateral(StubPool& pool, long long src1, long long src2,
                               long long a_n, RngStream& rng);
BilateralResult grow_bilateral(const WeightedGraph& wg, long long src1, long long src2,
                               long long a_n, RngStream& rng);

// Graph distance over the lazily-paired pool: bidirectional level-synchronous
// BFS revealing pairings on demand. Exact; nullopt when disconnected. Shares
// the pool with earlier SWG growth so both statistics come from one replicate.
std::optional<long long> lazy_bfs_distance(StubPool& pool, long long from, long long to,
                                           RngStream& rng);

struct ConnectionTimeStats {
    std::vector<double> normalized;  // CE_n / a_n over kept replicates
    double ks_to_exponential = std::numeric_limits<double>::quiet_NaN();
};

// Empirical law of CE_n / a_n plus its KS distance to the limiting
// exponential with mean mu/(nu-1); requires finite nu for the reference.
ConnectionTimeStats connection_time_stats(const std::vector<BilateralResult>& results,
                                          const DegreeDistribution& dist);

}  // namespace fpcm
