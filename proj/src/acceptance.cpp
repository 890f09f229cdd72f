#include "fpcm/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fpcm/config_model.hpp"
#include "fpcm/degree_model.hpp"
#include "fpcm/errors.hpp"
#include "fpcm/fpp_oracle.hpp"
#include "fpcm/limit_laws.hpp"
#include "fpcm/rng.hpp"
#include "fpcm/stats_harness.hpp"
#include "fpcm/swg_engine.hpp"
#include "fpcm/tree_flow.hpp"

namespace fs = std::filesystem;

namespace fpcm {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Acceptance-internal RNG streams use purpose = kPurposeBase + criterion id,
// disjoint from the runner pipelines' purpose tags.
constexpr std::uint64_t kPurposeBase = 100;

std::vector<ReplicateRecord> fpp_batch(const ExperimentConfig& cfg,
                                       const DegreeDistribution& dist, bool realized,
                                       long long n, long long reps, bool bfs) {
    ExperimentConfig c = cfg;
    c.dist = dist;
    c.compute_bfs = bfs;
    std::vector<ReplicateRecord> records(static_cast<std::size_t>(reps));
    parallel_for(reps, cfg.workers, [&](long long i) {
        records[static_cast<std::size_t>(i)] = run_fpp_replicate(c, realized, n, i);
    });
    return records;
}

// ---------------------------------------------------------------------------
// 1. Tree-flow exactness over every split-degree vector of length <= 8 with
// entries in {0,2,3} that keeps the flow alive. Per-vector Bonferroni gates
// catch gross single-vector errors; the verdict is the combined chi-square
// over all vectors (generation pmf) plus the combined z^2 statistic (E[T_m]).

bool pooled_counts(const std::vector<long long>& counts, const std::vector<double>& pmf,
                   long long runs, std::vector<double>& obs, std::vector<double>& expd) {
    obs.clear();
    expd.clear();
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        o_acc += static_cast<double>(counts[k]);
        e_acc += pmf[k] * static_cast<double>(runs);
        if (e_acc >= 5.0) {
            obs.push_back(o_acc);
            expd.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (o_acc > 0.0 || e_acc > 0.0) {
        if (obs.empty()) return false;  // single degenerate bin: nothing to test
        obs.back() += o_acc;
        expd.back() += e_acc;
    }
    return obs.size() >= 2;
}

CriterionResult c1_tree_exactness(const ExperimentConfig& cfg) {
    auto t0 = Clock::now();
    constexpr long long kPmfRuns = 100000;
    constexpr long long kTimeRuns = 20000;

    std::vector<std::vector<long long>> vecs;
    std::vector<long long> cur;
    std::function<void(long long)> extend = [&](long long alive) {
        if (cur.size() == 8) return;
        for (long long d : {0LL, 2LL, 3LL}) {
            long long next = alive + d - 1;
            if (next < 1) continue;
            cur.push_back(d);
            vecs.push_back(cur);
            extend(next);
            cur.pop_back();
        }
    };
    extend(1);

    const long long v_count = static_cast<long long>(vecs.size());
    const double bonferroni = 0.001 / static_cast<double>(v_count);
    std::vector<double> pmf_stat(vecs.size(), 0.0), pmf_dof(vecs.size(), 0.0);
    std::vector<double> z_sq(vecs.size(), 0.0);
    std::atomic<long long> pmf_gate{0}, time_gate{0};
    parallel_for(v_count, cfg.workers, [&](long long vi) {
        const std::vector<long long>& d = vecs[static_cast<std::size_t>(vi)];
        RngStream rng(derive_seed(cfg.master_seed, 1, static_cast<std::uint64_t>(vi),
                                  kPurposeBase + 1));
        std::vector<double> pmf = exact_generation_pmf(d);
        std::vector<long long> counts(pmf.size(), 0);
        std::vector<std::int32_t> alive;
        for (long long r = 0; r < kPmfRuns; ++r)
            ++counts[static_cast<std::size_t>(simulate_generation(d, rng, alive))];
        std::vector<double> obs, expd;
        if (pooled_counts(counts, pmf, kPmfRuns, obs, expd)) {
            ChiSquareResult cs = chi_square_test(obs, expd);
            pmf_stat[static_cast<std::size_t>(vi)] = cs.statistic;
            pmf_dof[static_cast<std::size_t>(vi)] = cs.dof;
            if (cs.p_value < bonferroni) ++pmf_gate;
        }
        std::vector<long long> sv = s_values(d);
        double target = 0.0;
        for (long long s : sv) target += 1.0 / static_cast<double>(s);
        double sum = 0.0, sumsq = 0.0;
        for (long long r = 0; r < kTimeRuns; ++r) {
            double t = simulate_construction(d, rng).split_times.back();
            sum += t;
            sumsq += t * t;
        }
        double mean = sum / kTimeRuns;
        double var = (sumsq - sum * sum / kTimeRuns) / (kTimeRuns - 1);
        double z = (mean - target) / std::sqrt(var / kTimeRuns);
        z_sq[static_cast<std::size_t>(vi)] = z * z;
        if (regularized_gamma_q(0.5, z * z / 2.0) < bonferroni) ++time_gate;
    });
    double g_stat = 0.0, g_dof = 0.0, z_stat = 0.0;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        g_stat += pmf_stat[i];
        g_dof += pmf_dof[i];
        z_stat += z_sq[i];
    }
    double g_p = regularized_gamma_q(g_dof / 2.0, g_stat / 2.0);
    double z_p = regularized_gamma_q(static_cast<double>(v_count) / 2.0, z_stat / 2.0);
    double secs = seconds_since(t0);

    CriterionResult r;
    r.id = 1;
    r.name = "tree-flow generation/time exactness";
    r.pass = g_p > 0.001 && z_p > 0.001 && pmf_gate.load() == 0 && time_gate.load() == 0 &&
             secs < 120.0;
    r.detail = "vectors=" + std::to_string(v_count) + " pooled-pmf p=" + fmt(g_p) +
               " pooled-time p=" + fmt(z_p) + " gate-failures=" +
               std::to_string(pmf_gate.load()) + "/" + std::to_string(time_gate.load()) +
               " (need pooled p>0.001, zero gate failures) " + fmt(secs) +
               "s (budget 120s)";
    return r;
}

// ---------------------------------------------------------------------------
// 2. Exchangeable-construction harmonic mean: E[G] = H_100 exactly, any B law.

CriterionResult c2_harmonic_identity(const ExperimentConfig& cfg) {
    auto t0 = Clock::now();
    constexpr long long kReps = 100000;
    constexpr long long kM = 100;
    SizeBiasedDistribution forward(DegreeDistribution::discrete_pareto(2.5));
    RngStream rng(derive_seed(cfg.master_seed, 2, 0, kPurposeBase + 2));
    double sum = 0.0, sumsq = 0.0;
    for (long long i = 0; i < kReps; ++i) {
        double g = static_cast<double>(sample_coupled_generations(forward, kM, rng).exchangeable);
        sum += g;
        sumsq += g * g;
    }
    double mean = sum / kReps;
    double var = (sumsq - sum * sum / kReps) / (kReps - 1);
    double se = std::sqrt(var / kReps);
    double h100 = 0.0;
    for (long long i = 1; i <= kM; ++i) h100 += 1.0 / static_cast<double>(i);
    double z = (mean - h100) / se;
    double secs = seconds_since(t0);

    CriterionResult r;
    r.id = 2;
    r.name = "coupled-generation harmonic mean";
    r.pass = std::fabs(z) <= 3.0 && secs < 60.0;
    r.detail = "mean=" + fmt(mean) + " target=" + fmt(h100) + " z=" + fmt(z) +
               " (tol |z|<=3) " + fmt(secs) + "s (budget 60s)";
    return r;
}

// ---------------------------------------------------------------------------
// 3. Realized-mode bilateral growth must agree with the Dijkstra oracle:
// equal path weight (up to float reassociation) and equal hop count on every
// kept replicate; discards must coincide with oracle unreachability.

CriterionResult c3_dijkstra_agreement(const ExperimentConfig& cfg) {
    auto t0 = Clock::now();
    constexpr long long kReps = 1000;
    const std::vector<long long> ns = {100, 1000};
    const std::vector<double> taus = {2.5, 4.0};
    std::atomic<long long> weight_bad{0}, hop_bad{0}, discard_bad{0}, kept_total{0};
    long long config_idx = 0;
    for (long long n : ns) {
        for (double tau : taus) {
            DegreeDistribution dist = DegreeDistribution::discrete_pareto(tau);
            const long long budget = a_n(dist, n);
            const std::uint64_t salt = 300 + static_cast<std::uint64_t>(config_idx);
            parallel_for(kReps, cfg.workers, [&](long long rep) {
                RngStream rng(derive_seed(cfg.master_seed, salt,
                                          static_cast<std::uint64_t>(rep), kPurposeBase + 3));
                DegreeSequence seq = sample_degree_sequence(n, dist, rng);
                MultiGraph g = build_multigraph(seq, rng);
                WeightedGraph wg = assign_weights(std::move(g), rng);
                long long src1 =
                    static_cast<long long>(rng.bounded(static_cast<std::uint64_t>(n)));
                long long src2 = src1;
                while (src2 == src1)
                    src2 = static_cast<long long>(rng.bounded(static_cast<std::uint64_t>(n)));
                BilateralResult res = grow_bilateral(wg, src1, src2, budget, rng);
                std::optional<PathResult> oracle = shortest_path(wg, src1, src2);
                if (res.discarded) {
                    if (oracle.has_value()) ++discard_bad;
                    return;
                }
                ++kept_total;
                if (!oracle.has_value()) {
                    ++discard_bad;
                    return;
                }
                double tol = 1e-9 * std::max(1.0, std::fabs(oracle->weight));
                if (std::fabs(res.wn - oracle->weight) > tol) ++weight_bad;
                if (res.hn != oracle->hops) ++hop_bad;
            });
            ++config_idx;
        }
    }
    double secs = seconds_since(t0);
    CriterionResult r;
    r.id = 3;
    r.name = "realized growth equals Dijkstra";
    r.pass = weight_bad.load() == 0 && hop_bad.load() == 0 && discard_bad.load() == 0 &&
             secs < 300.0;
    r.detail = "kept=" + std::to_string(kept_total.load()) + "/4000 mismatches weight=" +
               std::to_string(weight_bad.load()) + " hop=" + std::to_string(hop_bad.load()) +
               " discard=" + std::to_string(discard_bad.load()) + " (tol 0) " + fmt(secs) +
               "s (budget 300s)";
    return r;
}

// ---------------------------------------------------------------------------
// 4. Process and realized modes draw Hn and Wn from the same law.

CriterionResult c4_mode_equivalence(const ExperimentConfig& cfg) {
    auto t0 = Clock::now();
    constexpr long long kN = 10000, kReps = 10000;
    DegreeDistribution dist = DegreeDistribution::discrete_pareto(4.0);
    std::vector<ReplicateRecord> proc = fpp_batch(cfg, dist, false, kN, kReps, false);
    std::vector<ReplicateRecord> real = fpp_batch(cfg, dist, true, kN, kReps, false);
    std::vector<double> hp, hr, wp, wr;
    for (const ReplicateRecord& rec : proc)
        if (!rec.discarded) {
            hp.push_back(static_cast<double>(rec.hn));
            wp.push_back(rec.wn);
        }
    for (const ReplicateRecord& rec : real)
        if (!rec.discarded) {
            hr.push_back(static_cast<double>(rec.hn));
            wr.push_back(rec.wn);
        }
    KsResult kh = ks_two_sample(hp, hr);
    KsResult kw = ks_two_sample(wp, wr);
    double secs = seconds_since(t0);
    CriterionResult r;
    r.id = 4;
    r.name = "process vs realized mode equivalence";
    r.pass = kh.p_value > 0.001 && kw.p_value > 0.001;
    r.detail = "hop KS p=" + fmt(kh.p_value) + " weight KS p=" + fmt(kw.p_value) +
               " (tol p>0.001) kept=" + std::to_string(hp.size()) + "+" +
               std::to_string(hr.size()) + " " + fmt(secs) + "s";
    return r;
}

// ---------------------------------------------------------------------------
// 5 & 6. Hopcount CLT: WLS slope of mean/var of Hn against log n vs the
// theory slope alpha; standardized KS at the largest n. The heavy-tail run
// additionally checks that mean(Hn)/mean(graph distance) strictly increases
// (weighted paths lengthen in log n while graph distance stays log log n).

CriterionResult clt_slope_criterion(const ExperimentConfig& cfg, int id, double tau) {
    auto t0 = Clock::now();
    const bool heavy = tau < 3.0;
    DegreeDistribution dist = DegreeDistribution::discrete_pareto(tau);
    constexpr long long kReps = 2000;
    std::vector<ReplicateRecord> all;
    for (int p = 10; p <= 17; ++p) {
        long long n = 1LL << p;
        std::vector<ReplicateRecord> batch = fpp_batch(cfg, dist, false, n, kReps, heavy);
        all.insert(all.end(), batch.begin(), batch.end());
    }
    GridSamples grid = collect_grid_samples(all);
    TheoryConstants tc = theory_constants(dist);
    SummaryStats s = clt_report(grid, tc);
    bool mean_ok = std::fabs(s.mean_fit.slope - tc.alpha) <= 0.15 * tc.alpha;
    bool var_ok = std::fabs(s.var_fit.slope - tc.alpha) <= 0.25 * tc.alpha;
    bool ks_ok = s.standardized_hop_ks <= 0.1;

    // Diagnostic decomposition of the standardized KS at the largest n: the
    // CLT centering alpha*log n carries an O(1) finite-size offset that the
    // sqrt(alpha*log n) scale only suppresses asymptotically. Report the
    // offset and the KS after removing it, so a failure of the raw gate shows
    // whether the distributional shape (the CLT content) still matches.
    const std::vector<double>& top_hops = grid.back().hop;
    double logn_top = std::log(static_cast<double>(grid.back().n));
    double center = tc.alpha * logn_top;
    double scale = std::sqrt(tc.alpha * logn_top);
    double offset = sample_mean(top_hops) - center;
    std::vector<double> recentered;
    recentered.reserve(top_hops.size());
    for (double h : top_hops) recentered.push_back((h - center - offset) / scale);
    double ks_loc = ks_one_sample(recentered, [](double x) {
                        return 0.5 * std::erfc(-x / std::sqrt(2.0));
                    }).statistic;
    bool trend_ok = true;
    std::string trend_note;
    if (heavy) {
        SummaryStats ds = distance_contrast(grid, dist);
        trend_ok = ds.ratio_trend == TrendKind::Increasing;
        trend_note = std::string(" hop/graph trend=") + to_string(ds.ratio_trend) +
                     " (need increasing)";
    }
    double secs = seconds_since(t0);
    CriterionResult r;
    r.id = id;
    r.name = heavy ? "hopcount CLT slope, heavy tail + distance separation"
                   : "hopcount CLT slope, finite forward mean";
    r.pass = mean_ok && var_ok && ks_ok && trend_ok;
    r.detail = "alpha=" + fmt(tc.alpha) + " mean-slope=" + fmt(s.mean_fit.slope) +
               " (tol 15%) var-slope=" + fmt(s.var_fit.slope) + " (tol 25%) std-KS=" +
               fmt(s.standardized_hop_ks) + " (tol 0.1; centering offset=" + fmt(offset) +
               " hops, offset-corrected KS=" + fmt(ks_loc) + ")" + trend_note + " " +
               fmt(secs) + "s";
    return r;
}

// ---------------------------------------------------------------------------
// 7. Connection-time law: CE_n / a_n is asymptotically exponential with mean
// mu/(nu-1).

CriterionResult c7_connection_time(const ExperimentConfig& cfg) {
    auto t0 = Clock::now();
    constexpr long long kN = 100000, kReps = 2000;
    DegreeDistribution dist = DegreeDistribution::discrete_pareto(4.0);
    std::vector<ReplicateRecord> records = fpp_batch(cfg, dist, false, kN, kReps, false);
    std::vector<double> ratios;
    for (const ReplicateRecord& rec : records)
        if (!rec.discarded && rec.ce_n >= 0 && rec.a_n_used > 0)
            ratios.push_back(static_cast<double>(rec.ce_n) /
                             static_cast<double>(rec.a_n_used));
    double mu = dist.mean();
    double nu = SizeBiasedDistribution(dist).mean();
    double rate = (nu - 1.0) / mu;
    KsResult ks = ks_one_sample(ratios, [rate](double x) {
        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-rate * x);
    });
    double secs = seconds_since(t0);
    CriterionResult r;
    r.id = 7;
    r.name = "connection-time exponential law";
    r.pass = ks.statistic <= 0.05;
    r.detail = "KS=" + fmt(ks.statistic) + " (tol 0.05) kept=" +
               std::to_string(ratios.size()) + " mean-target=" + fmt(mu / (nu - 1.0)) + " " +
               fmt(secs) + "s";
    return r;
}

// ---------------------------------------------------------------------------
// 8. Weight recentering, finite forward mean: Wn - log n/(nu-1) vs direct
// draws of the composed limit V.

CriterionResult c8_weight_limit_finite_nu(const ExperimentConfig& cfg) {
    auto t0 = Clock::now();
    constexpr long long kN = 100000, kReps = 2000, kDraws = 2000;
    DegreeDistribution dist = DegreeDistribution::discrete_pareto(4.0);
    std::vector<ReplicateRecord> records = fpp_batch(cfg, dist, false, kN, kReps, false);
    double nu = SizeBiasedDistribution(dist).mean();
    double shift = std::log(static_cast<double>(kN)) / (nu - 1.0);
    std::vector<double> shifted;
    for (const ReplicateRecord& rec : records)
        if (!rec.discarded) shifted.push_back(rec.wn - shift);
    LimitLawSamplers samplers(dist);
    std::vector<double> vs(kDraws);
    parallel_for(kDraws, cfg.workers, [&](long long i) {
        RngStream rng(derive_seed(cfg.master_seed, 8, static_cast<std::uint64_t>(i),
                                  kPurposeBase + 8));
        vs[static_cast<std::size_t>(i)] = sample_V_tau_gt3(samplers, rng);
    });
    KsResult ks = ks_two_sample(shifted, vs);
    double secs = seconds_since(t0);
    CriterionResult r;
    r.id = 8;
    r.name = "weight recentering limit, finite forward mean";
    r.pass = ks.statistic <= 0.1;
    r.detail = "KS=" + fmt(ks.statistic) + " (tol 0.1) kept=" +
               std::to_string(shifted.size()) + " draws=" + std::to_string(kDraws) + " " +
               fmt(secs) + "s";
    return r;
}

// ---------------------------------------------------------------------------
// 9. Weight limit, heavy tail: Wn vs the sum of two explosion times.

CriterionResult c9_weight_limit_heavy_tail(const ExperimentConfig& cfg) {
    auto t0 = Clock::now();
    constexpr long long kN = 100000, kReps = 2000, kDraws = 2000;
    DegreeDistribution dist = DegreeDistribution::discrete_pareto(2.5);
    std::vector<ReplicateRecord> records = fpp_batch(cfg, dist, false, kN, kReps, false);
    std::vector<double> wn;
    for (const ReplicateRecord& rec : records)
        if (!rec.discarded) wn.push_back(rec.wn);
    LimitLawSamplers samplers(dist);
    std::vector<double> xs(kDraws), tails(kDraws, 0.0);
    parallel_for(kDraws, cfg.workers, [&](long long i) {
        RngStream rng(derive_seed(cfg.master_seed, 9, static_cast<std::uint64_t>(i),
                                  kPurposeBase + 9));
        XSampleInfo ia, ib;
        double x = sample_X(samplers, rng, &ia) + sample_X(samplers, rng, &ib);
        xs[static_cast<std::size_t>(i)] = x;
        tails[static_cast<std::size_t>(i)] = std::max(ia.tail_bound, ib.tail_bound);
    });
    double max_tail = *std::max_element(tails.begin(), tails.end());
    KsResult ks = ks_two_sample(wn, xs);
    double secs = seconds_since(t0);
    CriterionResult r;
    r.id = 9;
    r.name = "weight limit via explosion times, heavy tail";
    r.pass = ks.statistic <= 0.1 && max_tail <= 1e-6;
    r.detail = "KS=" + fmt(ks.statistic) + " (tol 0.1) kept=" + std::to_string(wn.size()) +
               " draws=" + std::to_string(kDraws) + " max-tail-bound=" + fmt(max_tail) +
               " (tol 1e-6) " + fmt(secs) + "s";
    return r;
}

// ---------------------------------------------------------------------------
// 10. Martingale-limit self-consistency: the one-generation decomposition
// W = sum_{j<=D} W~_j exp(-(nu-1) xi_j) must match direct sampling, and the
// numeric Laplace inversion must match the empirical transform of W*.

CriterionResult c10_martingale_consistency(const ExperimentConfig& cfg) {
    auto t0 = Clock::now();
    constexpr long long kSamples = 10000;
    DegreeDistribution dist = DegreeDistribution::discrete_pareto(4.0);
    LimitLawSamplers samplers(dist, 10000);
    const double nu1 = samplers.nu() - 1.0;
    std::vector<double> direct(kSamples), composed(kSamples);
    parallel_for(kSamples, cfg.workers, [&](long long i) {
        RngStream rng(derive_seed(cfg.master_seed, 10, static_cast<std::uint64_t>(i),
                                  kPurposeBase + 10));
        direct[static_cast<std::size_t>(i)] = sample_W(samplers, rng);
    });
    parallel_for(kSamples, cfg.workers, [&](long long i) {
        RngStream rng(derive_seed(cfg.master_seed, 10,
                                  static_cast<std::uint64_t>(kSamples + i),
                                  kPurposeBase + 10));
        long long d = samplers.dist.sample(rng);
        double total = 0.0;
        for (long long j = 0; j < d; ++j)
            total += std::exp(-nu1 * rng.exponential()) * sample_W_subtree(samplers, rng);
        composed[static_cast<std::size_t>(i)] = total;
    });
    KsResult ks = ks_two_sample(direct, composed);

    DegreeDistribution ex = DegreeDistribution::explicit_pmf({{2, 0.5}, {3, 0.5}});
    LimitLawSamplers lap_samplers(ex, 15000);
    lap_samplers.laplace_samples = 50000;
    RngStream lap_rng(derive_seed(cfg.master_seed, 10,
                                  static_cast<std::uint64_t>(2 * kSamples),
                                  kPurposeBase + 10));
    LaplaceCheckResult lap = laplace_check(lap_samplers, {0.5, 1.0, 2.0}, lap_rng);
    bool lap_ok = true;
    double worst_sigma = 0.0;
    for (const LaplaceCheckPoint& p : lap.points) {
        double disc = std::fabs(p.phi_numeric - p.phi_empirical);
        worst_sigma = std::max(worst_sigma, disc / p.empirical_se);
        if (disc > 3.0 * p.empirical_se) lap_ok = false;
    }
    double secs = seconds_since(t0);
    CriterionResult r;
    r.id = 10;
    r.name = "martingale-limit self-consistency + Laplace inversion";
    r.pass = ks.p_value > 0.001 && lap_ok;
    r.detail = "decomposition KS p=" + fmt(ks.p_value) + " (tol p>0.001) laplace worst=" +
               fmt(worst_sigma) + " SE (tol 3) " + fmt(secs) + "s";
    return r;
}

// ---------------------------------------------------------------------------
// 11. Structural invariants: pmf normalization, the sequence-conditional law
// of the first attached forward degree, and the TV trend of empirical forward
// degrees toward the size-biased law.

CriterionResult c11_structural_invariants(const ExperimentConfig& cfg) {
    auto t0 = Clock::now();

    // (a) pmf normalization: head sum plus analytic tail must be 1.
    double worst_norm = 0.0;
    std::vector<DegreeDistribution> dists;
    dists.push_back(DegreeDistribution::discrete_pareto(2.5));
    dists.push_back(DegreeDistribution::discrete_pareto(3.5));
    dists.push_back(DegreeDistribution::discrete_pareto(4.0));
    dists.push_back(DegreeDistribution::explicit_pmf({{2, 0.5}, {3, 0.5}}));
    for (const DegreeDistribution& d : dists) {
        constexpr long long kHead = 20000;
        double total = 0.0;
        for (long long k = d.min_degree(); k <= kHead; ++k) total += d.pmf(k);
        total += d.survival(kHead + 1);
        worst_norm = std::max(worst_norm, std::fabs(total - 1.0));
        SizeBiasedDistribution fw(d);
        double ftotal = 0.0;
        for (long long j = std::max(0LL, d.min_degree() - 1); j <= kHead; ++j)
            ftotal += fw.pmf(j);
        ftotal += fw.survival(kHead + 1);
        worst_norm = std::max(worst_norm, std::fabs(ftotal - 1.0));
    }
    bool norm_ok = worst_norm <= 1e-12;

    // (b) first-attachment marginal on a fixed realized degree sequence: the
    // forward degree of the first real vertex joining the growth is a
    // size-biased pick among the non-source stubs.
    DegreeDistribution d25 = DegreeDistribution::discrete_pareto(2.5);
    RngStream seq_rng(derive_seed(cfg.master_seed, 11, 0, kPurposeBase + 11));
    DegreeSequence seq = sample_degree_sequence(1000, d25, seq_rng);
    const long long src_degree = seq.degrees[0];
    std::map<long long, double> ref;
    for (std::size_t i = 1; i < seq.degrees.size(); ++i)
        ref[seq.degrees[i] - 1] += static_cast<double>(seq.degrees[i]);
    for (auto& [j, w] : ref)
        w /= static_cast<double>(seq.stub_total() - src_degree);

    constexpr long long kDraws = 100000;
    std::vector<long long> draw_value(kDraws, -1);
    parallel_for(kDraws, cfg.workers, [&](long long i) {
        RngStream rng(derive_seed(cfg.master_seed, 11, static_cast<std::uint64_t>(1 + i),
                                  kPurposeBase + 11));
        StubPool pool(seq);
        SwgState st = grow_single(pool, 0, src_degree + 1, rng);
        if (!st.r_steps.empty())
            draw_value[static_cast<std::size_t>(i)] =
                st.b_sequence[static_cast<std::size_t>(st.r_steps[0])];
    });
    std::map<long long, long long> counts;
    long long kept_draws = 0;
    for (long long v : draw_value)
        if (v >= 0) {
            ++counts[v];
            ++kept_draws;
        }
    std::vector<double> obs, expd;
    double o_acc = 0.0, e_acc = 0.0;
    for (const auto& [j, p] : ref) {
        auto it = counts.find(j);
        o_acc += it == counts.end() ? 0.0 : static_cast<double>(it->second);
        e_acc += p * static_cast<double>(kept_draws);
        if (e_acc >= 5.0) {
            obs.push_back(o_acc);
            expd.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if ((o_acc > 0.0 || e_acc > 0.0) && !obs.empty()) {
        obs.back() += o_acc;
        expd.back() += e_acc;
    }
    ChiSquareResult marginal = chi_square_test(obs, expd);
    bool marginal_ok = marginal.p_value > 0.001;

    // (c) TV(empirical forward degrees, size-biased law) decreasing in n.
    DegreeDistribution d4 = DegreeDistribution::discrete_pareto(4.0);
    SizeBiasedDistribution fwd4(d4);
    std::vector<double> tvs;
    for (long long n : {1000LL, 10000LL, 100000LL}) {
        RngStream rng(derive_seed(cfg.master_seed, 12, static_cast<std::uint64_t>(n),
                                  kPurposeBase + 11));
        DegreeSequence s = sample_degree_sequence(n, d4, rng);
        MultiGraph g = build_multigraph(s, rng);
        std::map<long long, double> emp;
        const double inv = 1.0 / static_cast<double>(g.stub_count());
        for (long long stub = 0; stub < g.stub_count(); ++stub) {
            std::uint32_t partner = g.stub_pair[static_cast<std::size_t>(stub)];
            long long owner = g.stub_owner[partner];
            emp[g.degree(owner) - 1] += inv;
        }
        long long j_max = emp.rbegin()->first;
        double l1 = fwd4.survival(j_max + 1);  // tail where the empirical mass is zero
        for (long long j = 1; j <= j_max; ++j) {
            auto it = emp.find(j);
            double e = it == emp.end() ? 0.0 : it->second;
            l1 += std::fabs(e - fwd4.pmf(j));
        }
        tvs.push_back(0.5 * l1);
    }
    bool tv_ok = tvs[0] > tvs[1] && tvs[1] > tvs[2];

    double secs = seconds_since(t0);
    CriterionResult r;
    r.id = 11;
    r.name = "structural invariants";
    r.pass = norm_ok && marginal_ok && tv_ok;
    r.detail = "norm-err=" + fmt(worst_norm) + " (tol 1e-12) marginal p=" +
               fmt(marginal.p_value) + " (tol p>0.001) TV=" + fmt(tvs[0]) + ">" + fmt(tvs[1]) +
               ">" + fmt(tvs[2]) + " (need decreasing) " + fmt(secs) + "s";
    return r;
}

// ---------------------------------------------------------------------------
// 12. Byte-identical CSV output across repeated runs and worker counts (the
// wall-time column, inherently nondeterministic, is masked out).

std::string masked_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!header) {
            std::size_t pos = line.rfind(',');
            if (pos != std::string::npos) line.erase(pos);
        }
        header = false;
        out << line << '\n';
    }
    return out.str();
}

CriterionResult c12_determinism(const ExperimentConfig& cfg) {
    auto t0 = Clock::now();
    ExperimentConfig base;
    base.dist = DegreeDistribution::discrete_pareto(2.5);
    base.dist_spec = "pareto(2.5)";
    base.n_grid = {200, 500};
    base.replicates = 100;
    base.master_seed = cfg.master_seed;
    base.mode = ExperimentConfig::Mode::Both;
    base.suite = ExperimentConfig::Suite::Fpp;
    base.compute_bfs = true;
    struct Variant {
        long long workers;
        const char* tag;
    };
    const std::vector<Variant> variants = {
        {1, "w1_first"}, {1, "w1_second"}, {4, "w4_first"}, {4, "w4_second"}};
    std::vector<std::string> process_bytes, realized_bytes;
    for (const Variant& v : variants) {
        ExperimentConfig c = base;
        c.workers = v.workers;
        c.out_dir = (fs::path(cfg.out_dir) / "determinism" / v.tag).string();
        run(c);
        process_bytes.push_back(masked_csv((fs::path(c.out_dir) / "fpp_process.csv").string()));
        realized_bytes.push_back(
            masked_csv((fs::path(c.out_dir) / "fpp_realized.csv").string()));
    }
    bool ok = true;
    for (std::size_t i = 1; i < variants.size(); ++i)
        ok = ok && process_bytes[i] == process_bytes[0] &&
             realized_bytes[i] == realized_bytes[0];
    double secs = seconds_since(t0);
    CriterionResult r;
    r.id = 12;
    r.name = "byte-identical determinism across worker counts";
    r.pass = ok;
    r.detail = std::string(ok ? "4 runs identical" : "runs differ") +
               " (workers 1,1,4,4; ms column masked) " + fmt(secs) + "s";
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(const ExperimentConfig& cfg,
                                                  const std::vector<int>& only) {
    using Fn = CriterionResult (*)(const ExperimentConfig&);
    const Fn table[12] = {
        c1_tree_exactness,
        c2_harmonic_identity,
        c3_dijkstra_agreement,
        c4_mode_equivalence,
        [](const ExperimentConfig& c) { return clt_slope_criterion(c, 5, 4.0); },
        [](const ExperimentConfig& c) { return clt_slope_criterion(c, 6, 2.5); },
        c7_connection_time,
        c8_weight_limit_finite_nu,
        c9_weight_limit_heavy_tail,
        c10_martingale_consistency,
        c11_structural_invariants,
        c12_determinism,
    };
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 12; ++id) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        CriterionResult r = table[id - 1](cfg);
        char line[512];
        std::snprintf(line, sizeof line, "[%2d/12] %s  %s -- %s", r.id,
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        std::cout << line << std::endl;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace fpcm
