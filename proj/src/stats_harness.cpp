#include "fpcm/stats_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "fpcm/errors.hpp"

namespace fpcm {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TheoryConstants theory_constants(const DegreeDistribution& dist) {
    TheoryConstants tc;
    if (dist.kind() == DegreeDistribution::Kind::DiscretePareto) {
        double tau = dist.tau();
        if (tau == 3.0)
            throw CriticalTauError("theory_constants: tau = 3 is a critical case");
        if (tau < 3.0) {
            tc.alpha = 2.0 * (tau - 2.0) / (tau - 1.0);
            tc.beta = 1.0;
            tc.gamma = 0.0;
            tc.a_n_exponent = (tau - 2.0) / (tau - 1.0);
            return tc;
        }
    }
    // Finite forward mean (power-law tail exponent > 3, or explicit pmf).
    double nu = dist.forward_mean();
    if (nu <= 1.0)
        throw DegenerateDistributionError(
            "theory_constants: forward mean <= 1, exploration does not grow");
    tc.alpha = nu / (nu - 1.0);
    tc.beta = tc.alpha;
    tc.gamma = 1.0 / (nu - 1.0);
    tc.a_n_exponent = 0.5;
    return tc;
}

long long a_n(const DegreeDistribution& dist, long long n) {
    if (n < 2) throw InvalidParameterError("a_n: n must be >= 2");
    TheoryConstants tc = theory_constants(dist);
    double x = std::pow(static_cast<double>(n), tc.a_n_exponent);
    double rounded = std::round(x);
    // pow can land a hair below an exact integer power; snap before ceil.
    if (std::fabs(x - rounded) < 1e-9 * std::max(1.0, rounded)) x = rounded;
    long long result = static_cast<long long>(std::ceil(x));
    return std::max<long long>(1, result);
}

// ---------------------------------------------------------------------------

double kolmogorov_p(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // Complementary (theta-function) form, rapidly convergent here:
        // K(lambda) = sqrt(2 pi)/lambda * sum_{k odd} exp(-k^2 pi^2 / (8 lambda^2)).
        double t = std::exp(-kPi * kPi / (8.0 * lambda * lambda));
        double cdf = std::sqrt(2.0 * kPi) / lambda *
                     (t + std::pow(t, 9.0) + std::pow(t, 25.0) + std::pow(t, 49.0));
        return std::max(0.0, std::min(1.0, 1.0 - cdf));
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16) break;
    }
    return std::max(0.0, std::min(1.0, 2.0 * sum));
}

KsResult ks_one_sample(std::vector<double> sample,
                       const std::function<double(double)>& reference_cdf) {
    if (sample.empty()) throw EmptyInputError("ks_one_sample: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = reference_cdf(sample[i]);
        double hi = (static_cast<double>(i) + 1.0) / n - f;
        double lo = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    KsResult out;
    out.statistic = d;
    out.n_effective = static_cast<long long>(sample.size());
    out.p_value = kolmogorov_p(std::sqrt(n) * d);
    return out;
}

KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw EmptyInputError("ks_two_sample: empty sample");
    std::vector<double> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= v) ++i;
        while (j < sb.size() && sb[j] <= v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    KsResult out;
    out.statistic = d;
    double n_eff = na * nb / (na + nb);
    out.n_effective = static_cast<long long>(std::llround(n_eff));
    out.p_value = kolmogorov_p(std::sqrt(n_eff) * d);
    return out;
}

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0)
        throw InvalidParameterError("regularized_gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // Series for P(a, x); Q = 1 - P.
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        return std::max(0.0, std::min(1.0, 1.0 - p));
    }
    // Continued fraction for Q (modified Lentz).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    double q = h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    return std::max(0.0, std::min(1.0, q));
}

ChiSquareResult chi_square_test(const std::vector<double>& observed,
                                const std::vector<double>& expected,
                                long long extra_constraints) {
    if (observed.empty()) throw EmptyInputError("chi_square_test: no bins");
    if (observed.size() != expected.size())
        throw InvalidParameterError("chi_square_test: observed/expected size mismatch");
    long long dof = static_cast<long long>(observed.size()) - 1 - extra_constraints;
    if (dof < 1) throw InvalidParameterError("chi_square_test: nonpositive degrees of freedom");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0)
            throw InvalidParameterError("chi_square_test: expected count must be positive");
        double diff = observed[i] - expected[i];
        stat += diff * diff / expected[i];
    }
    ChiSquareResult out;
    out.statistic = stat;
    out.dof = static_cast<double>(dof);
    out.p_value = regularized_gamma_q(out.dof / 2.0, stat / 2.0);
    return out;
}

double tv_distance(const std::map<long long, double>& p, const std::map<long long, double>& q) {
    double l1 = 0.0;
    auto it_p = p.begin();
    auto it_q = q.begin();
    while (it_p != p.end() || it_q != q.end()) {
        if (it_q == q.end() || (it_p != p.end() && it_p->first < it_q->first)) {
            l1 += std::fabs(it_p->second);
            ++it_p;
        } else if (it_p == p.end() || it_q->first < it_p->first) {
            l1 += std::fabs(it_q->second);
            ++it_q;
        } else {
            l1 += std::fabs(it_p->second - it_q->second);
            ++it_p;
            ++it_q;
        }
    }
    return 0.5 * l1;
}

WlsFit weighted_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& weights) {
    if (x.size() != y.size() || x.size() != weights.size())
        throw InvalidParameterError("weighted_least_squares: size mismatch");
    if (x.size() < 2) throw InsufficientDataError("weighted_least_squares: need >= 2 points");
    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(weights[i] > 0.0))
            throw InvalidParameterError("weighted_least_squares: weights must be positive");
        sw += weights[i];
        swx += weights[i] * x[i];
        swy += weights[i] * y[i];
        swxx += weights[i] * x[i] * x[i];
        swxy += weights[i] * x[i] * y[i];
    }
    double det = sw * swxx - swx * swx;
    if (det <= 0.0 || !std::isfinite(det))
        throw InsufficientDataError("weighted_least_squares: x values are degenerate");
    WlsFit fit;
    fit.slope = (sw * swxy - swx * swy) / det;
    fit.intercept = (swxx * swy - swx * swxy) / det;
    // With weights = 1/var(y_i), the coefficient covariance is (X'WX)^{-1}.
    fit.slope_se = std::sqrt(sw / det);
    fit.intercept_se = std::sqrt(swxx / det);
    return fit;
}

double sample_mean(const std::vector<double>& v) {
    if (v.empty()) throw EmptyInputError("sample_mean: empty sample");
    double s = 0.0;
    for (double t : v) s += t;
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = sample_mean(v);
    double s = 0.0;
    for (double t : v) s += (t - m) * (t - m);
    return s / static_cast<double>(v.size() - 1);
}

const char* to_string(TrendKind trend) {
    switch (trend) {
        case TrendKind::Increasing: return "increasing";
        case TrendKind::Flat: return "flat";
        case TrendKind::Decreasing: return "decreasing";
        default: return "mixed";
    }
}

namespace {

PerNStats per_n_stats(const GridPointSamples& g) {
    PerNStats s;
    s.n = g.n;
    s.kept = static_cast<long long>(g.hop.size());
    s.discarded = g.discarded;
    if (!g.hop.empty()) {
        s.mean_hop = sample_mean(g.hop);
        s.var_hop = sample_variance(g.hop);
    }
    if (!g.weight.empty()) {
        s.mean_weight = sample_mean(g.weight);
        s.var_weight = sample_variance(g.weight);
    }
    if (!g.ce_ratio.empty()) {
        s.mean_ce_ratio = sample_mean(g.ce_ratio);
        s.var_ce_ratio = sample_variance(g.ce_ratio);
    }
    if (!g.graph_dist.empty()) {
        s.mean_graph_dist = sample_mean(g.graph_dist);
        s.var_graph_dist = sample_variance(g.graph_dist);
    }
    return s;
}

GridSamples sorted_by_n(GridSamples grid) {
    std::sort(grid.begin(), grid.end(),
              [](const GridPointSamples& a, const GridPointSamples& b) { return a.n < b.n; });
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i].n == grid[i - 1].n)
            throw InvalidParameterError("grid points must have distinct n");
    return grid;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

TrendKind classify_trend(const std::vector<double>& r) {
    if (r.size() < 2) return TrendKind::Flat;
    bool inc = true, dec = true, flat = true;
    for (std::size_t i = 1; i < r.size(); ++i) {
        double tol = 1e-12 * std::max(1.0, std::fabs(r[i]));
        if (std::fabs(r[i] - r[i - 1]) <= tol) {
            inc = false;
            dec = false;
        } else if (r[i] > r[i - 1]) {
            dec = false;
            flat = false;
        } else {
            inc = false;
            flat = false;
        }
    }
    if (flat) return TrendKind::Flat;
    if (inc) return TrendKind::Increasing;
    if (dec) return TrendKind::Decreasing;
    return TrendKind::Mixed;
}

}  // namespace

SummaryStats clt_report(const GridSamples& grid_in, const TheoryConstants& constants) {
    if (grid_in.size() < 2)
        throw InsufficientDataError("clt_report: need at least two grid points");
    GridSamples grid = sorted_by_n(grid_in);
    for (const GridPointSamples& g : grid)
        if (g.hop.size() < 100)
            throw InsufficientDataError("clt_report: need >= 100 kept replicates per grid point");

    SummaryStats out;
    out.alpha = constants.alpha;
    out.beta = constants.beta;
    out.gamma = constants.gamma;

    std::vector<double> x, y_mean, w_mean, y_var, w_var;
    for (const GridPointSamples& g : grid) {
        PerNStats s = per_n_stats(g);
        out.per_n.push_back(s);
        double logn = std::log(static_cast<double>(g.n));
        double m = static_cast<double>(g.hop.size());
        x.push_back(logn);
        y_mean.push_back(s.mean_hop);
        // weight = 1 / se^2 for the mean; variance estimator se^2 ~ 2 var^2/(m-1)
        double se2_mean = std::max(s.var_hop / m, 1e-12);
        w_mean.push_back(1.0 / se2_mean);
        y_var.push_back(s.var_hop);
        double se2_var = std::max(2.0 * s.var_hop * s.var_hop / (m - 1.0), 1e-12);
        w_var.push_back(1.0 / se2_var);
    }
    out.mean_fit = weighted_least_squares(x, y_mean, w_mean);
    out.var_fit = weighted_least_squares(x, y_var, w_var);

    for (const GridPointSamples& g : grid) {
        double logn = std::log(static_cast<double>(g.n));
        double center = constants.alpha * logn;
        double scale = std::sqrt(constants.alpha * logn);
        std::vector<double> z;
        z.reserve(g.hop.size());
        for (double h : g.hop) z.push_back((h - center) / scale);
        KsResult ks = ks_one_sample(std::move(z), standard_normal_cdf);
        out.standardized_hop_ks_grid.push_back(ks.statistic);
    }
    out.standardized_hop_ks = out.standardized_hop_ks_grid.back();

    const GridPointSamples& largest = grid.back();
    if (!largest.weight.empty()) {
        double logn = std::log(static_cast<double>(largest.n));
        out.recentered_weight_mean = sample_mean(largest.weight) - constants.gamma * logn;
        out.recentered_weight_var = sample_variance(largest.weight);
    }
    return out;
}

SummaryStats distance_contrast(const GridSamples& grid_in, const DegreeDistribution& dist) {
    if (grid_in.empty()) throw InsufficientDataError("distance_contrast: no grid points");
    GridSamples grid = sorted_by_n(grid_in);
    for (const GridPointSamples& g : grid)
        if (g.graph_dist.empty())
            throw InsufficientDataError("distance_contrast: records lack graph distances");

    SummaryStats out;
    std::vector<double> ratios;
    for (const GridPointSamples& g : grid) {
        PerNStats s = per_n_stats(g);
        out.per_n.push_back(s);
        if (!g.hop.empty() && s.mean_graph_dist > 0.0)
            ratios.push_back(s.mean_hop / s.mean_graph_dist);
    }
    out.hop_to_graph_ratio = ratios;
    out.ratio_trend = classify_trend(ratios);

    const PerNStats& top = out.per_n.back();
    bool heavy_tail = dist.kind() == DegreeDistribution::Kind::DiscretePareto && dist.tau() < 3.0;
    if (heavy_tail) {
        out.graph_distance_coefficient =
            top.mean_graph_dist / std::log(std::log(static_cast<double>(top.n)));
        out.graph_distance_reference = 2.0 / std::fabs(std::log(dist.tau() - 2.0));
    } else {
        if (!dist.has_finite_forward_mean())
            throw CriticalTauError("distance_contrast: tau = 3 has no leading constant to test");
        double nu = dist.forward_mean();
        if (nu <= 1.0)
            throw DegenerateDistributionError("distance_contrast: forward mean <= 1");
        out.graph_distance_coefficient = top.mean_graph_dist / std::log(static_cast<double>(top.n));
        out.graph_distance_reference = 1.0 / std::log(nu);
    }
    return out;
}

}  // namespace fpcm
