#include "fpcm/swg_engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "fpcm/errors.hpp"
#include "fpcm/stats_harness.hpp"

namespace fpcm {

StubPool::StubPool(const DegreeSequence& seq) {
    n_ = seq.size();
    if (n_ == 0) throw EmptyInputError("StubPool: empty degree sequence");
    long long total = seq.stub_total();
    if (total % 2 != 0)
        throw OddStubTotalError("StubPool: odd stub total " + std::to_string(total));
    if (total > static_cast<long long>(kNoStub))
        throw InvalidParameterError("StubPool: stub total exceeds index budget");
    offset_.resize(n_ + 1);
    offset_[0] = 0;
    for (long long v = 0; v < n_; ++v)
        offset_[v + 1] = offset_[v] + static_cast<std::uint64_t>(seq.degrees[v]);
    owner_.resize(total);
    for (long long v = 0; v < n_; ++v)
        for (std::uint64_t s = offset_[v]; s < offset_[v + 1]; ++s)
            owner_[s] = static_cast<std::uint32_t>(v);
    pair_.assign(total, kNoStub);
    free_list_.resize(total);
    free_pos_.resize(total);
    for (long long s = 0; s < total; ++s) {
        free_list_[s] = static_cast<std::uint32_t>(s);
        free_pos_[s] = static_cast<std::uint32_t>(s);
    }
}

void StubPool::remove_free(std::uint32_t stub) {
    std::uint32_t pos = free_pos_[stub];
    std::uint32_t last = free_list_.back();
    free_list_[pos] = last;
    free_pos_[last] = pos;
    free_list_.pop_back();
    free_pos_[stub] = kNoStub;
}

std::uint32_t StubPool::pair_uniform(std::uint32_t stub, RngStream& rng) {
    assert(pair_[stub] == kNoStub && free_pos_[stub] != kNoStub);
    remove_free(stub);
    // The free count is even before the call, so at least one stub remains.
    assert(!free_list_.empty());
    std::uint64_t idx = rng.bounded(free_list_.size());
    std::uint32_t partner = free_list_[idx];
    std::uint32_t last = free_list_.back();
    free_list_[idx] = last;
    free_pos_[last] = static_cast<std::uint32_t>(idx);
    free_list_.pop_back();
    free_pos_[partner] = kNoStub;
    pair_[stub] = partner;
    pair_[partner] = stub;
    return partner;
}

std::uint32_t StubPool::reveal(std::uint32_t stub, RngStream& rng) {
    if (pair_[stub] != kNoStub) return pair_[stub];
    return pair_uniform(stub, rng);
}

const char* to_string(DiscardReason reason) {
    switch (reason) {
        case DiscardReason::Exhausted: return "exhausted";
        case DiscardReason::NotConnected: return "not_connected";
        default: return "";
    }
}

namespace {

struct SideArrays {
    std::vector<std::int8_t> side;  // 0 unexplored, 1 first SWG, 2 second
    std::vector<std::int32_t> hop;
    std::vector<double> dist;
    explicit SideArrays(long long n)
        : side(static_cast<std::size_t>(n), 0),
          hop(static_cast<std::size_t>(n), 0),
          dist(static_cast<std::size_t>(n), 0.0) {}
};

enum class StepKind { Fresh, Cycle, Artificial, Meet, Exhausted };

// One SWG growing against the lazy pool (process mode).
struct ProcessGrower {
    StubPool& pool;
    SideArrays& mark;
    std::vector<std::uint32_t>& allowed_pos;  // stub -> index in allowed, kNoStub if absent
    std::int8_t id;

    SwgState state;
    std::vector<std::uint32_t> allowed;  // real allowed stubs
    long long artificial = 0;

    std::uint32_t meet_partner = kNoStub;  // stub inside the other SWG
    std::uint32_t meet_owner = kNoStub;    // owner of the chosen stub, this side

    ProcessGrower(StubPool& p, SideArrays& m, std::vector<std::uint32_t>& pos,
                  std::int8_t side_id, long long source)
        : pool(p), mark(m), allowed_pos(pos), id(side_id) {
        state.source = source;
        mark.side[source] = id;
        mark.hop[source] = 0;
        mark.dist[source] = 0.0;
        state.b_sequence.push_back(pool.degree(source));
        state.added.push_back({static_cast<std::uint32_t>(source), 0, 0.0});
        for (std::uint64_t s = pool.stubs_begin(source); s < pool.stubs_end(source); ++s)
            add_allowed(static_cast<std::uint32_t>(s));
    }

    void add_allowed(std::uint32_t stub) {
        allowed_pos[stub] = static_cast<std::uint32_t>(allowed.size());
        allowed.push_back(stub);
    }

    void remove_allowed_at(std::uint32_t idx) {
        std::uint32_t last = allowed.back();
        allowed[idx] = last;
        allowed_pos[last] = idx;
        allowed.pop_back();
    }

    long long s_now() const { return static_cast<long long>(allowed.size()) + artificial; }

    std::uint32_t meet_partner_owner() const { return pool.owner(meet_partner); }

    // other_id == 0 disables meet detection (single-SWG growth / phase 1).
    StepKind step(RngStream& rng, std::int8_t other_id) {
        long long s = s_now();
        if (s == 0) {
            state.exhausted = true;
            return StepKind::Exhausted;
        }
        state.time += rng.exponential() / static_cast<double>(s);
        std::uint64_t k = rng.bounded(static_cast<std::uint64_t>(s));
        ++state.steps;
        if (k >= allowed.size()) {  // an artificial stub dies
            --artificial;
            state.b_sequence.push_back(0);
            return StepKind::Artificial;
        }
        std::uint32_t chosen = allowed[static_cast<std::uint32_t>(k)];
        remove_allowed_at(static_cast<std::uint32_t>(k));
        allowed_pos[chosen] = kNoStub;
        std::uint32_t partner = pool.pair_uniform(chosen, rng);
        std::uint32_t w = pool.owner(partner);
        if (mark.side[w] == id) {  // cycle closes inside this SWG
            std::uint32_t pidx = allowed_pos[partner];
            assert(pidx != kNoStub);  // free stubs of SWG vertices are allowed
            remove_allowed_at(pidx);
            allowed_pos[partner] = kNoStub;
            ++artificial;
            state.b_sequence.push_back(0);
            return StepKind::Cycle;
        }
        if (other_id != 0 && mark.side[w] == other_id) {
            meet_partner = partner;
            meet_owner = pool.owner(chosen);
            return StepKind::Meet;
        }
        mark.side[w] = id;
        mark.hop[w] = mark.hop[pool.owner(chosen)] + 1;
        mark.dist[w] = state.time;
        for (std::uint64_t t = pool.stubs_begin(w); t < pool.stubs_end(w); ++t)
            if (static_cast<std::uint32_t>(t) != partner)
                add_allowed(static_cast<std::uint32_t>(t));
        state.b_sequence.push_back(pool.degree(w) - 1);
        state.r_steps.push_back(state.steps);
        state.added.push_back({w, mark.hop[w], state.time});
        return StepKind::Fresh;
    }

    void finish_state() {
        state.allowed_count = s_now();
        state.artificial_count = artificial;
    }
};

struct RealizedEntry {
    double prio;
    std::uint32_t stub;  // kNoStub marks an artificial stub's death entry

    bool operator>(const RealizedEntry& o) const {
        if (prio != o.prio) return prio > o.prio;
        return stub > o.stub;
    }
};

// One SWG growing on a fixed weighted multigraph (realized mode).
struct RealizedGrower {
    const WeightedGraph& wg;
    SideArrays& mark;
    std::vector<char>& consumed;
    std::int8_t id;
    bool crossing;  // phase 2: discount entries whose far endpoint is in SWG1
    double r1;      // phase-1 radius used by the discount

    SwgState state;
    std::priority_queue<RealizedEntry, std::vector<RealizedEntry>, std::greater<RealizedEntry>>
        queue;
    long long artificial = 0;
    long long s_alive = 0;

    std::uint32_t meet_partner = kNoStub;
    std::uint32_t meet_owner = kNoStub;

    RealizedGrower(const WeightedGraph& w, SideArrays& m, std::vector<char>& c,
                   std::int8_t side_id, long long source, bool cross, double radius)
        : wg(w), mark(m), consumed(c), id(side_id), crossing(cross), r1(radius) {
        state.source = source;
        mark.side[source] = id;
        mark.hop[source] = 0;
        mark.dist[source] = 0.0;
        s_alive = g().degree(source);
        state.b_sequence.push_back(s_alive);
        state.added.push_back({static_cast<std::uint32_t>(source), 0, 0.0});
        for (std::uint64_t t = g().stub_offset[source]; t < g().stub_offset[source + 1]; ++t)
            push_stub(static_cast<std::uint32_t>(t), 0.0);
    }

    const MultiGraph& g() const { return wg.graph; }

    std::uint32_t meet_partner_owner() const { return g().stub_owner[meet_partner]; }

    void push_stub(std::uint32_t stub, double base) {
        double prio = base + wg.stub_weight(stub);
        if (crossing) {
            std::uint32_t far = g().stub_pair[stub];
            std::uint32_t fw = g().stub_owner[far];
            // SWG1 already traversed r1 - dist1(fw) of this edge from the far
            // side; the residual from our side costs that much less.
            if (mark.side[fw] == 1) prio -= (r1 - mark.dist[fw]);
        }
        queue.push({prio, stub});
    }

    StepKind step(RngStream& rng, std::int8_t other_id) {
        for (;;) {
            if (queue.empty()) {
                state.exhausted = true;
                return StepKind::Exhausted;
            }
            RealizedEntry e = queue.top();
            queue.pop();
            if (e.stub == kNoStub) {  // artificial stub dies
                --artificial;
                --s_alive;
                state.time = e.prio;
                ++state.steps;
                state.b_sequence.push_back(0);
                return StepKind::Artificial;
            }
            if (consumed[e.stub]) continue;  // stale entry; not a step
            std::uint32_t s = e.stub;
            std::uint32_t p = g().stub_pair[s];
            assert(!consumed[p]);  // stubs are consumed in pairs
            consumed[s] = 1;
            consumed[p] = 1;
            std::uint32_t w = g().stub_owner[p];
            state.time = e.prio;
            ++state.steps;
            if (mark.side[w] == id) {  // cycle: replace the pair by an artificial stub
                queue.push({e.prio + rng.exponential(), kNoStub});
                ++artificial;
                --s_alive;
                state.b_sequence.push_back(0);
                return StepKind::Cycle;
            }
            if (other_id != 0 && mark.side[w] == other_id) {
                meet_partner = p;
                meet_owner = g().stub_owner[s];
                return StepKind::Meet;
            }
            mark.side[w] = id;
            mark.hop[w] = mark.hop[g().stub_owner[s]] + 1;
            mark.dist[w] = e.prio;
            long long b = g().degree(w) - 1;
            s_alive += b - 1;
            for (std::uint64_t t = g().stub_offset[w]; t < g().stub_offset[w + 1]; ++t)
                if (static_cast<std::uint32_t>(t) != p)
                    push_stub(static_cast<std::uint32_t>(t), e.prio);
            state.b_sequence.push_back(b);
            state.r_steps.push_back(state.steps);
            state.added.push_back({w, mark.hop[w], e.prio});
            return StepKind::Fresh;
        }
    }

    void finish_state() {
        state.allowed_count = s_alive;
        state.artificial_count = artificial;
    }
};

void check_source(long long source, long long n, const char* what) {
    if (source < 0 || source >= n)
        throw InvalidParameterError(std::string(what) + ": source out of range");
}

template <typename Grower>
BilateralResult run_bilateral(Grower& g1, long long src2, long long a_n, RngStream& rng,
                              SideArrays& mark,
                              const std::function<Grower(long long)>& make_second) {
    BilateralResult out;
    out.a_n_used = a_n;
    long long overshoot = 0;
    bool exhausted1 = false;
    for (long long i = 0; i < a_n; ++i) {
        StepKind k = g1.step(rng, 0);
        if (k == StepKind::Exhausted) {
            exhausted1 = true;
            break;
        }
        if (k != StepKind::Fresh) ++overshoot;
    }
    if (mark.side[src2] == 1) {  // second source already inside SWG1
        out.r_overshoot = overshoot;
        out.ce_n = 0;
        out.h1 = mark.hop[src2];
        out.h2 = 0;
        out.hn = out.h1;
        out.wn = mark.dist[src2];
        out.collision_vertex = src2;
        return out;
    }
    if (exhausted1) {  // src1's component ran dry without reaching src2
        out.r_overshoot = overshoot;
        out.discarded = true;
        out.reason = DiscardReason::Exhausted;
        return out;
    }
    Grower g2 = make_second(src2);
    for (;;) {
        StepKind k = g2.step(rng, 1);
        if (k == StepKind::Exhausted) {
            out.r_overshoot = overshoot;
            out.discarded = true;
            out.reason = DiscardReason::NotConnected;
            return out;
        }
        if (k == StepKind::Meet) break;
        if (k != StepKind::Fresh) ++overshoot;
    }
    out.r_overshoot = overshoot;
    out.ce_n = g2.state.steps;
    std::uint32_t x = g2.meet_partner_owner();
    std::uint32_t u = g2.meet_owner;
    out.h1 = mark.hop[x];
    out.h2 = mark.hop[u] + 1;  // the connecting edge adds one hop
    out.hn = out.h1 + out.h2;
    out.wn = g1.state.time + g2.state.time;
    out.collision_vertex = x;
    return out;
}

}  // namespace

SwgState grow_single(StubPool& pool, long long source, long long steps, RngStream& rng) {
    check_source(source, pool.vertex_count(), "grow_single");
    if (steps < 0) throw InvalidParameterError("grow_single: steps must be >= 0");
    SideArrays mark(pool.vertex_count());
    std::vector<std::uint32_t> allowed_pos(static_cast<std::size_t>(pool.stub_count()), kNoStub);
    ProcessGrower g(pool, mark, allowed_pos, 1, source);
    for (long long i = 0; i < steps; ++i)
        if (g.step(rng, 0) == StepKind::Exhausted) break;
    g.finish_state();
    return std::move(g.state);
}

SwgState grow_single(const WeightedGraph& wg, long long source, long long steps,
                     RngStream& rng) {
    check_source(source, wg.graph.n, "grow_single");
    if (steps < 0) throw InvalidParameterError("grow_single: steps must be >= 0");
    SideArrays mark(wg.graph.n);
    std::vector<char> consumed(static_cast<std::size_t>(wg.graph.stub_count()), 0);
    RealizedGrower g(wg, mark, consumed, 1, source, false, 0.0);
    for (long long i = 0; i < steps; ++i)
        if (g.step(rng, 0) == StepKind::Exhausted) break;
    g.finish_state();
    return std::move(g.state);
}

BilateralResult grow_bilateral(StubPool& pool, long long src1, long long src2, long long a_n,
                               RngStream& rng) {
    check_source(src1, pool.vertex_count(), "grow_bilateral");
    check_source(src2, pool.vertex_count(), "grow_bilateral");
    if (src1 == src2) throw InvalidParameterError("grow_bilateral: sources must differ");
    if (a_n < 1) throw InvalidParameterError("grow_bilateral: a_n must be >= 1");
    SideArrays mark(pool.vertex_count());
    std::vector<std::uint32_t> allowed_pos(static_cast<std::size_t>(pool.stub_count()), kNoStub);
    ProcessGrower g1(pool, mark, allowed_pos, 1, src1);
    std::function<ProcessGrower(long long)> make_second = [&](long long s) {
        return ProcessGrower(pool, mark, allowed_pos, 2, s);
    };
    return run_bilateral(g1, src2, a_n, rng, mark, make_second);
}

BilateralResult grow_bilateral(const WeightedGraph& wg, long long src1, long long src2,
                               long long a_n, RngStream& rng) {
    check_source(src1, wg.graph.n, "grow_bilateral");
    check_source(src2, wg.graph.n, "grow_bilateral");
    if (src1 == src2) throw InvalidParameterError("grow_bilateral: sources must differ");
    if (a_n < 1) throw InvalidParameterError("grow_bilateral: a_n must be >= 1");
    SideArrays mark(wg.graph.n);
    std::vector<char> consumed(static_cast<std::size_t>(wg.graph.stub_count()), 0);
    RealizedGrower g1(wg, mark, consumed, 1, src1, false, 0.0);
    std::function<RealizedGrower(long long)> make_second = [&](long long s) {
        return RealizedGrower(wg, mark, consumed, 2, s, true, g1.state.time);
    };
    return run_bilateral(g1, src2, a_n, rng, mark, make_second);
}

std::optional<long long> lazy_bfs_distance(StubPool& pool, long long from, long long to,
                                           RngStream& rng) {
    check_source(from, pool.vertex_count(), "lazy_bfs_distance");
    check_source(to, pool.vertex_count(), "lazy_bfs_distance");
    if (from == to) return 0;
    const long long n = pool.vertex_count();
    std::vector<std::int32_t> dist_f(static_cast<std::size_t>(n), -1);
    std::vector<std::int32_t> dist_b(static_cast<std::size_t>(n), -1);
    std::vector<std::uint32_t> front_f{static_cast<std::uint32_t>(from)};
    std::vector<std::uint32_t> front_b{static_cast<std::uint32_t>(to)};
    std::vector<std::uint32_t> next;
    dist_f[from] = 0;
    dist_b[to] = 0;
    long long level_f = 0, level_b = 0;
    const long long kInf = std::numeric_limits<long long>::max();
    long long best = kInf;
    // Level-synchronous bidirectional search: after expanding to levels
    // (lf, lb), every s-t path of length <= lf + lb + 1 has been observed via
    // a cross edge, and any unseen path has length >= lf + lb + 2.
    while (!front_f.empty() && !front_b.empty()) {
        if (best <= level_f + level_b + 1) break;
        bool fwd = front_f.size() <= front_b.size();
        std::vector<std::uint32_t>& front = fwd ? front_f : front_b;
        std::vector<std::int32_t>& dist_mine = fwd ? dist_f : dist_b;
        std::vector<std::int32_t>& dist_other = fwd ? dist_b : dist_f;
        long long next_level = (fwd ? level_f : level_b) + 1;
        next.clear();
        for (std::uint32_t v : front) {
            for (std::uint64_t s = pool.stubs_begin(v); s < pool.stubs_end(v); ++s) {
                std::uint32_t p = pool.reveal(static_cast<std::uint32_t>(s), rng);
                std::uint32_t w = pool.owner(p);
                if (dist_other[w] >= 0) {
                    long long cand = next_level + dist_other[w];
                    if (cand < best) best = cand;
                }
                if (dist_mine[w] < 0) {
                    dist_mine[w] = static_cast<std::int32_t>(next_level);
                    next.push_back(w);
                }
            }
        }
        front.swap(next);
        (fwd ? level_f : level_b) = next_level;
    }
    if (best == kInf) return std::nullopt;
    return best;
}

ConnectionTimeStats connection_time_stats(const std::vector<BilateralResult>& results,
                                          const DegreeDistribution& dist) {
    if (!dist.has_finite_forward_mean())
        throw InfiniteNuError(
            "connection_time_stats: limiting exponential requires a finite forward mean");
    double nu = dist.forward_mean();
    if (nu <= 1.0)
        throw DegenerateDistributionError(
            "connection_time_stats: forward mean <= 1 gives no exponential limit");
    ConnectionTimeStats out;
    for (const BilateralResult& r : results)
        if (!r.discarded)
            out.normalized.push_back(static_cast<double>(r.ce_n) /
                                     static_cast<double>(r.a_n_used));
    if (out.normalized.empty())
        throw EmptyInputError("connection_time_stats: no kept replicates");
    double mean = dist.mean() / (nu - 1.0);
    KsResult ks = ks_one_sample(out.normalized, [mean](double x) {
        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / mean);
    });
    out.ks_to_exponential = ks.statistic;
    return out;
}

}  // namespace fpcm
