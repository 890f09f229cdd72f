// Theory constants, statistical tests, and experiment-level summaries.
//
// The limit theory being validated predicts, for the hopcount Hn between two
// uniform vertices, a CLT with mean and variance both asymptotically
// alpha * log n, where
//   - finite forward mean (nu < inf, nu > 1):  alpha = beta = nu/(nu-1),
//     weight slope gamma = 1/(nu-1), exploration budget exponent 1/2;
//   - infinite forward mean (power-law tail exponent tau in (2,3)):
//     alpha = 2(tau-2)/(tau-1), beta = 1, gamma = 0,
//     exploration budget exponent (tau-2)/(tau-1).
// The unweighted graph distance grows like log n / log nu in the first
// regime but like 2 log log n / |log(tau-2)| in the second, so the ratio
// hopcount / graph distance separates the two geometries.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fpcm/degree_model.hpp"

namespace fpcm {

struct TheoryConstants {
    double alpha = 0.0;          // hopcount CLT slope (mean and variance)
    double beta = 0.0;           // tree-generation slope
    double gamma = 0.0;          // weight slope: Wn ~ gamma * log n
    double a_n_exponent = 0.0;   // first-phase budget a_n = ceil(n^exponent)
};

TheoryConstants theory_constants(const DegreeDistribution& dist);

// ceil(n^exponent) with a guard against pow() landing just below an exact
// integer (e.g. pow(10^6, 0.5) must give 1000, not 1001).
long long a_n(const DegreeDistribution& dist, long long n);

// ---------------------------------------------------------------------------
// Generic statistics.

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;        // asymptotic Kolmogorov distribution
    long long n_effective = 0;
};

KsResult ks_one_sample(std::vector<double> sample,
                       const std::function<double(double)>& reference_cdf);
KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

// Upper tail Q(lambda) of the Kolmogorov distribution.
double kolmogorov_p(double lambda);

struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

// Pearson chi-square of observed vs expected counts; dof = bins - 1 -
// extra_constraints (extra_constraints counts fitted parameters).
ChiSquareResult chi_square_test(const std::vector<double>& observed,
                                const std::vector<double>& expected,
                                long long extra_constraints = 0);

// Regularized upper incomplete gamma Q(a, x); Q(dof/2, stat/2) is the
// chi-square upper tail.
double regularized_gamma_q(double a, double x);

// Total variation distance between two pmfs on integers: half the L1
// difference over the union of supports.
double tv_distance(const std::map<long long, double>& p, const std::map<long long, double>& q);

struct WlsFit {
    double intercept = 0.0;
    double slope = 0.0;
    double intercept_se = 0.0;
    double slope_se = 0.0;
};

// Weighted least squares of y on x (weights ~ 1/variance of each y).
WlsFit weighted_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& weights);

double sample_mean(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);  // unbiased; 0 if size < 2

// ---------------------------------------------------------------------------
// Experiment-level summaries.

// Kept-replicate samples at one grid point n. Vectors hold one entry per
// kept replicate; graph_dist may be empty when BFS distances were not
// recorded.
struct GridPointSamples {
    long long n = 0;
    long long discarded = 0;
    std::vector<double> hop;         // Hn
    std::vector<double> weight;      // Wn
    std::vector<double> ce_ratio;    // CE_n / a_n
    std::vector<double> graph_dist;  // unweighted graph distance
};

using GridSamples = std::vector<GridPointSamples>;

struct PerNStats {
    long long n = 0;
    long long kept = 0;
    long long discarded = 0;
    double mean_hop = 0.0, var_hop = 0.0;
    double mean_weight = 0.0, var_weight = 0.0;
    double mean_ce_ratio = 0.0, var_ce_ratio = 0.0;
    double mean_graph_dist = 0.0, var_graph_dist = 0.0;
};

enum class TrendKind { Increasing, Flat, Decreasing, Mixed };
const char* to_string(TrendKind trend);

struct SummaryStats {
    std::vector<PerNStats> per_n;

    // Hopcount CLT: WLS of mean(Hn) and var(Hn) against log n.
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    double gamma = std::numeric_limits<double>::quiet_NaN();
    WlsFit mean_fit;
    WlsFit var_fit;
    // KS of (Hn - alpha log n)/sqrt(alpha log n) against standard normal,
    // one entry per grid point; standardized_hop_ks is the largest-n entry.
    std::vector<double> standardized_hop_ks_grid;
    double standardized_hop_ks = std::numeric_limits<double>::quiet_NaN();
    // Weight recentering at the largest n: mean(Wn) - gamma log n.
    double recentered_weight_mean = std::numeric_limits<double>::quiet_NaN();
    double recentered_weight_var = std::numeric_limits<double>::quiet_NaN();

    // Graph-distance contrast.
    // finite-nu regime: mean graph distance / log n vs 1/log nu;
    // tau in (2,3):     mean graph distance / log log n vs 2/|log(tau-2)|.
    double graph_distance_coefficient = std::numeric_limits<double>::quiet_NaN();
    double graph_distance_reference = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> hop_to_graph_ratio;  // mean(Hn)/mean(graph dist) per n
    TrendKind ratio_trend = TrendKind::Flat;
};

// Regression/KS summary of the hopcount CLT over an n-grid. Requires at
// least two grid points with at least 100 kept replicates each.
SummaryStats clt_report(const GridSamples& grid, const TheoryConstants& constants);

// Graph-distance contrast summary; requires graph distances on every grid
// point. The hop/graph ratio trend is classified across the grid.
SummaryStats distance_contrast(const GridSamples& grid, const DegreeDistribution& dist);

}  // namespace fpcm
