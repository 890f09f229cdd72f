// Samplers for the limiting random variables of first passage percolation on
// configuration models, plus a numeric/Monte-Carlo cross-check of the
// martingale limit's Laplace transform.
//
// Finite forward mean nu > 1: the exploration is a supercritical branching
// race whose alive count Z(t) satisfies Z(t) e^{-(nu-1)t} -> W. The weight
// limit is
//   V = [ -log W1 - log W2 + Lambda + log(mu (nu-1)) ] / (nu - 1),
// where Lambda = log((nu-1) M / mu) and M is exponential with mean
// mu/(nu-1) (the limit of CE_n / a_n). Lambda is the log of a standard
// exponential, i.e. the negative of a standard Gumbel variable: its CDF is
// 1 - exp(-e^x).
//
// Infinite forward mean (power-law tail exponent tau in (2,3)): the
// branching race explodes in finite time and the weight limit is a sum of
// two independent explosion times X = sum_i E_i / S_i with S_i = D + B_2 +
// ... + B_i; the truncation tail carries a recorded rigorous bound.
#pragma once

#include <cstdint>
#include <vector>

#include "fpcm/degree_model.hpp"
#include "fpcm/rng.hpp"

namespace fpcm {

inline constexpr double kEulerMascheroni = 0.57721566490153286554942;

struct LimitLawSamplers {
    DegreeDistribution dist;
    SizeBiasedDistribution forward;
    double mu = 0.0;

    // Stop growing the alive count here when estimating W.
    long long population_cap = 100000;
    // Sample count for the empirical Laplace transform.
    long long laplace_samples = 100000;
    // Explosion-time truncation: stop once x_floor_run consecutive
    // increments fall below x_increment_floor AND the rigorous tail bound
    // drops to x_tail_target (or x_max_steps is hit).
    double x_increment_floor = 1e-9;
    long long x_floor_run = 100;
    double x_tail_target = 1e-6;
    long long x_max_steps = 20000000;

    explicit LimitLawSamplers(const DegreeDistribution& d, long long cap = 100000);

    // Forward mean; throws InfiniteNu when the distribution has none.
    double nu() const;
};

// Martingale limit W with root degree ~ F: grows alive count from D, each
// split adds B - 1 with B ~ g, waits Exp(1)/alive, and returns
// alive * e^{-(nu-1) T} once alive reaches population_cap (0 on extinction,
// which requires a test-only distribution). E[W] = mu.
double sample_W(const LimitLawSamplers& s, RngStream& rng);

// Subtree version: root contributes B ~ g immediately; E = nu.
double sample_W_subtree(const LimitLawSamplers& s, RngStream& rng);

// Single-ancestor version W* = e^{-(nu-1) xi} W-subtree with xi ~ Exp(1);
// E = 1. This is the variable whose Laplace transform laplace_check inverts.
double sample_W_star(const LimitLawSamplers& s, RngStream& rng);

// Connection-time limit M ~ Exp(mean mu/(nu-1)) and Lambda = log((nu-1)M/mu).
double sample_M(const LimitLawSamplers& s, RngStream& rng);
double sample_Lambda(const LimitLawSamplers& s, RngStream& rng);

// V for the finite-nu regime; W draws are conditioned positive.
double sample_V_tau_gt3(const LimitLawSamplers& s, RngStream& rng);
// The deterministic composition used by sample_V_tau_gt3, exposed for
// plug-in arithmetic checks.
double compose_V_tau_gt3(const LimitLawSamplers& s, double w1, double w2, double m);

struct XSampleInfo {
    long long truncation_index = 0;
    double tail_bound = 0.0;  // bound on E[truncated remainder | stop state]
};

// Explosion time X = sum_i E_i / S_i for tau in (2,3).
double sample_X(const LimitLawSamplers& s, RngStream& rng, XSampleInfo* info = nullptr);

struct LaplaceCheckPoint {
    double t = 0.0;
    double phi_numeric = 0.0;    // from inverting the closed-form phi^{-1}
    double phi_empirical = 0.0;  // mean of e^{-t W*} over samples
    double empirical_se = 0.0;
};

struct LaplaceCheckResult {
    std::vector<LaplaceCheckPoint> points;
    double max_discrepancy = 0.0;
};

// Inverts phi^{-1}(x) = (1-x) exp(-Integral_x^1 f(s) ds), where the combined
// integrand f(s) = (nu-1)/(h(s)-s) + 1/(1-s) reduces to the polynomial ratio
// -p(s)/r(s) after dividing out the (1-s) roots, and compares with the
// empirical transform of W* samples. Explicit distributions only (h must be
// a finite-degree polynomial).
LaplaceCheckResult laplace_check(const LimitLawSamplers& s, const std::vector<double>& t_values,
                                 RngStream& rng);

}  // namespace fpcm
