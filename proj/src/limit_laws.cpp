#include "fpcm/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpcm/errors.hpp"

namespace fpcm {

LimitLawSamplers::LimitLawSamplers(const DegreeDistribution& d, long long cap)
    : dist(d), forward(d), mu(d.mean()), population_cap(cap) {
    if (population_cap < 1000)
        throw InvalidParameterError("LimitLawSamplers: population_cap must be >= 1000");
}

double LimitLawSamplers::nu() const {
    if (!dist.has_finite_forward_mean())
        throw InfiniteNuError("limit sampler requires a finite forward mean");
    return dist.forward_mean();
}

namespace {

double require_supercritical_nu(const LimitLawSamplers& s) {
    double nu = s.nu();
    if (nu <= 1.0)
        throw DegenerateDistributionError(
            "limit sampler: forward mean <= 1 makes nu - 1 a singularity");
    return nu;
}

double grow_martingale_limit(const LimitLawSamplers& s, long long alive, RngStream& rng) {
    double nu = require_supercritical_nu(s);
    double t = 0.0;
    while (alive > 0 && alive < s.population_cap) {
        t += rng.exponential() / static_cast<double>(alive);
        alive += s.forward.sample(rng) - 1;
    }
    if (alive <= 0) return 0.0;  // extinction: test-only distributions
    return static_cast<double>(alive) * std::exp(-(nu - 1.0) * t);
}

}  // namespace

double sample_W(const LimitLawSamplers& s, RngStream& rng) {
    return grow_martingale_limit(s, s.dist.sample(rng), rng);
}

double sample_W_subtree(const LimitLawSamplers& s, RngStream& rng) {
    return grow_martingale_limit(s, s.forward.sample(rng), rng);
}

double sample_W_star(const LimitLawSamplers& s, RngStream& rng) {
    double nu = require_supercritical_nu(s);
    double xi = rng.exponential();
    return std::exp(-(nu - 1.0) * xi) * sample_W_subtree(s, rng);
}

double sample_M(const LimitLawSamplers& s, RngStream& rng) {
    double nu = require_supercritical_nu(s);
    return s.mu / (nu - 1.0) * rng.exponential();
}

double sample_Lambda(const LimitLawSamplers& s, RngStream& rng) {
    double nu = require_supercritical_nu(s);
    return std::log((nu - 1.0) * sample_M(s, rng) / s.mu);
}

double compose_V_tau_gt3(const LimitLawSamplers& s, double w1, double w2, double m) {
    double nu = require_supercritical_nu(s);
    if (!(w1 > 0.0) || !(w2 > 0.0) || !(m > 0.0))
        throw InvalidParameterError("compose_V_tau_gt3: inputs must be positive");
    double lambda = std::log((nu - 1.0) * m / s.mu);
    return (-std::log(w1) - std::log(w2) + lambda + std::log(s.mu * (nu - 1.0))) / (nu - 1.0);
}

namespace {

double positive_W(const LimitLawSamplers& s, RngStream& rng) {
    for (int tries = 0; tries < 1000; ++tries) {
        double w = sample_W(s, rng);
        if (w > 0.0) return w;
    }
    throw DeadProcessError("sample_V_tau_gt3: W repeatedly extinct; distribution degenerate");
}

}  // namespace

double sample_V_tau_gt3(const LimitLawSamplers& s, RngStream& rng) {
    double w1 = positive_W(s, rng);
    double w2 = positive_W(s, rng);
    double m = sample_M(s, rng);
    return compose_V_tau_gt3(s, w1, w2, m);
}

namespace {

// Bound on the expected truncated remainder sum_{k>0} E / S_{i+k} given the
// current alive count: the first k0 terms use S nondecreasing by >= 1 per
// step (B >= 1), the rest use S_{i+k} >= max of k i.i.d. forward degrees,
// whose reciprocal mean is <= Gamma(1+1/(tau-2)) (c_g k)^{-1/(tau-2)}.
double explosion_tail_bound(double s_now, double tau, double c_g) {
    double p = 1.0 / (tau - 2.0);  // > 1
    double gamma_fac = std::tgamma(1.0 + p);
    double best = std::numeric_limits<double>::infinity();
    double k0 = 1.0;
    for (int j = 0; j < 64; ++j) {
        double head = std::log1p(k0 / s_now);
        double tail = gamma_fac * std::pow(c_g * k0, -p) * k0 / (p - 1.0);
        best = std::min(best, head + tail);
        k0 *= 2.0;
    }
    return best;
}

}  // namespace

double sample_X(const LimitLawSamplers& s, RngStream& rng, XSampleInfo* info) {
    if (s.dist.kind() != DegreeDistribution::Kind::DiscretePareto || s.dist.tau() >= 3.0)
        throw FiniteNuMisuseError(
            "sample_X: explosion time exists only for power-law tails with exponent in (2,3)");
    double tau = s.dist.tau();
    // Leading constant of the forward-degree tail P(B >= j) ~ c_g j^{-(tau-2)}.
    double c_g = std::pow(2.0, tau - 1.0) * (tau - 1.0) / ((tau - 2.0) * s.mu);

    double x = 0.0;
    double alive = static_cast<double>(s.dist.sample(rng));
    long long run = 0;
    long long i = 1;
    double bound = std::numeric_limits<double>::infinity();
    for (;;) {
        double inc = rng.exponential() / alive;
        x += inc;
        run = inc < s.x_increment_floor ? run + 1 : 0;
        if (run >= s.x_floor_run && (i & 1023) == 0) {
            bound = explosion_tail_bound(alive, tau, c_g);
            if (bound <= s.x_tail_target) break;
        }
        if (i >= s.x_max_steps) {
            bound = explosion_tail_bound(alive, tau, c_g);
            break;
        }
        alive += static_cast<double>(s.forward.sample(rng));
        ++i;
    }
    if (info) {
        info->truncation_index = i;
        info->tail_bound = bound;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Laplace transform check.

namespace {

double horner(const std::vector<double>& coeff, double x) {
    double v = 0.0;
    for (std::size_t i = coeff.size(); i-- > 0;) v = v * x + coeff[i];
    return v;
}

struct AdaptiveSimpson {
    const std::vector<double>& p;
    const std::vector<double>& r;
    double tol;

    double f(double x) const { return -horner(p, x) / horner(r, x); }

    double simpson(double a, double fa, double b, double fb, double fm) const {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }

    double recurse(double a, double fa, double b, double fb, double fm, double whole, double eps,
                   int depth) {
        if (depth > 60)
            throw IntegrationFailureError("laplace_check: quadrature failed to converge");
        double m = 0.5 * (a + b);
        double fl = f(0.5 * (a + m));
        double fr = f(0.5 * (m + b));
        double left = simpson(a, fa, m, fm, fl);
        double right = simpson(m, fm, b, fb, fr);
        if (std::fabs(left + right - whole) <= 15.0 * eps)
            return left + right + (left + right - whole) / 15.0;
        return recurse(a, fa, m, fm, fl, left, 0.5 * eps, depth + 1) +
               recurse(m, fm, b, fb, fr, right, 0.5 * eps, depth + 1);
    }

    double integrate(double a, double b) {
        if (a >= b) return 0.0;
        double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
        double whole = simpson(a, fa, b, fb, fm);
        return recurse(a, fa, b, fb, fm, whole, tol, 0);
    }
};

}  // namespace

LaplaceCheckResult laplace_check(const LimitLawSamplers& s, const std::vector<double>& t_values,
                                 RngStream& rng) {
    if (s.dist.kind() != DegreeDistribution::Kind::Explicit)
        throw InvalidParameterError(
            "laplace_check: closed-form inversion requires an explicit (finite support) pmf");
    if (t_values.empty()) throw EmptyInputError("laplace_check: no t values");
    for (double t : t_values)
        if (!(t > 0.0)) throw InvalidParameterError("laplace_check: t values must be positive");
    double nu = require_supercritical_nu(s);

    // h(s) = sum_j g_j s^j as coefficients, g_0 = 0 by the min-degree-2 rule.
    long long max_b = s.dist.max_degree() - 1;
    if (max_b < 1)
        throw InvalidParameterError("laplace_check: forward support is empty");
    std::vector<double> h(static_cast<std::size_t>(max_b) + 1, 0.0);
    for (long long j = 1; j <= max_b; ++j) h[static_cast<std::size_t>(j)] = s.forward.pmf(j);

    // a(s) = s - h(s); r = a deflated by its root at 1: a(s) = (1-s) r(s),
    // r_k = sum_{j<=k} a_j. Then b(s) = r(s) - (nu-1) also vanishes at 1:
    // b(s) = -(1-s) p(s), p_k = -sum_{j<=k} b_j. The combined integrand is
    // f(s) = (nu-1)/(h(s)-s) + 1/(1-s) = -p(s)/r(s).
    std::vector<double> a(h.size(), 0.0);
    for (std::size_t k = 0; k < h.size(); ++k) a[k] = -h[k];
    a[1] += 1.0;
    std::vector<double> r(h.size() > 1 ? h.size() - 1 : 1, 0.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        acc += a[k];
        r[k] = acc;
    }
    std::vector<double> b = r;
    b[0] -= (nu - 1.0);
    std::vector<double> p(b.size() > 1 ? b.size() - 1 : 1, 0.0);
    acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        acc += b[k];
        p[k] = -acc;
    }

    AdaptiveSimpson quad{p, r, 1e-8};
    auto phi_inverse = [&](double x) {
        return (1.0 - x) * std::exp(-quad.integrate(x, 1.0));
    };
    // phi^{-1} is strictly decreasing from +inf (x -> 0) to 0 (x -> 1).
    auto phi_numeric = [&](double t) {
        double lo = 1e-14, hi = 1.0 - 1e-14;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (phi_inverse(mid) > t)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-13) break;
        }
        return 0.5 * (lo + hi);
    };

    std::vector<double> samples(static_cast<std::size_t>(s.laplace_samples));
    for (double& v : samples) v = sample_W_star(s, rng);

    LaplaceCheckResult out;
    for (double t : t_values) {
        LaplaceCheckPoint pt;
        pt.t = t;
        pt.phi_numeric = phi_numeric(t);
        double mean = 0.0;
        for (double v : samples) mean += std::exp(-t * v);
        mean /= static_cast<double>(samples.size());
        double var = 0.0;
        for (double v : samples) {
            double d = std::exp(-t * v) - mean;
            var += d * d;
        }
        var /= static_cast<double>(samples.size() - 1);
        pt.phi_empirical = mean;
        pt.empirical_se = std::sqrt(var / static_cast<double>(samples.size()));
        out.points.push_back(pt);
        out.max_discrepancy =
            std::max(out.max_discrepancy, std::fabs(pt.phi_numeric - pt.phi_empirical));
    }
    return out;
}

}  // namespace fpcm
