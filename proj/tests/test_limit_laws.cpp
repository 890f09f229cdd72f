#include <cmath>
#include <vector>

#include "doctest.h"
#include "fpcm/degree_model.hpp"
#include "fpcm/errors.hpp"
#include "fpcm/limit_laws.hpp"
#include "fpcm/rng.hpp"
#include "fpcm/stats_harness.hpp"
#include "test_util.hpp"

using namespace fpcm;

namespace {

// With every degree equal to 3 the exploration started from an edge is a
// binary (Yule) split process: forward degree B = 2 surely, nu = 2. Closed
// forms: W ~ Gamma(3,1) (three independent unit-rate lines from the root),
// the subtree limit is Gamma(2,1), and the one-ancestor transform is
// phi_{W*}(t) = 1/(1+t).
DegreeDistribution yule_dist() { return DegreeDistribution::explicit_pmf({{3, 1.0}}); }

struct MeanVar {
    double mean = 0.0;
    double se = 0.0;
};

MeanVar summarize(const std::vector<double>& v) {
    double sum = 0.0, sumsq = 0.0;
    for (double x : v) {
        sum += x;
        sumsq += x * x;
    }
    double n = static_cast<double>(v.size());
    MeanVar mv;
    mv.mean = sum / n;
    mv.se = std::sqrt((sumsq - sum * sum / n) / (n - 1) / n);
    return mv;
}

double gamma_cdf_3(double x) {  // Gamma(3,1) CDF
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x) * (1.0 + x + 0.5 * x * x);
}
double gamma_cdf_2(double x) {  // Gamma(2,1) CDF
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x) * (1.0 + x);
}

}  // namespace

TEST_SUITE("limit_laws") {

TEST_CASE("sampler construction guards") {
    CHECK_THROWS_AS(LimitLawSamplers(yule_dist(), 500), InvalidParameterError);
    LimitLawSamplers heavy(DegreeDistribution::discrete_pareto(2.5));
    CHECK_THROWS_AS(heavy.nu(), InfiniteNuError);
    LimitLawSamplers fine(yule_dist());
    CHECK(fine.nu() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fine.mu == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("martingale limit W is Gamma(3,1) in the Yule case") {
    LimitLawSamplers s(yule_dist(), 20000);
    RngStream rng(0x11110001);
    constexpr long long kDraws = 6000;
    std::vector<double> w(kDraws), expw(kDraws);
    for (long long i = 0; i < kDraws; ++i) {
        w[static_cast<std::size_t>(i)] = sample_W(s, rng);
        expw[static_cast<std::size_t>(i)] = std::exp(-w[static_cast<std::size_t>(i)]);
    }
    MeanVar mv = summarize(w);
    CHECK(std::fabs(mv.mean - 3.0) < 4.0 * mv.se);  // E[W] = mu
    KsResult ks = ks_one_sample(w, gamma_cdf_3);
    INFO("KS = ", ks.statistic, " p = ", ks.p_value);
    CHECK(ks.p_value > 1e-5);
    // Laplace transform of Gamma(3,1) at t = 1 is 2^-3.
    MeanVar lap = summarize(expw);
    CHECK(std::fabs(lap.mean - 0.125) < 4.0 * lap.se);
}

TEST_CASE("subtree and one-ancestor variants in the Yule case") {
    LimitLawSamplers s(yule_dist(), 20000);
    RngStream rng(0x11110002);
    constexpr long long kDraws = 6000;
    std::vector<double> sub(kDraws), star(kDraws);
    for (long long i = 0; i < kDraws; ++i) {
        sub[static_cast<std::size_t>(i)] = sample_W_subtree(s, rng);
        star[static_cast<std::size_t>(i)] = sample_W_star(s, rng);
    }
    MeanVar mv_sub = summarize(sub);
    CHECK(std::fabs(mv_sub.mean - 2.0) < 4.0 * mv_sub.se);  // E = nu
    KsResult ks = ks_one_sample(sub, gamma_cdf_2);
    INFO("subtree KS = ", ks.statistic, " p = ", ks.p_value);
    CHECK(ks.p_value > 1e-5);

    MeanVar mv_star = summarize(star);
    CHECK(std::fabs(mv_star.mean - 1.0) < 4.0 * mv_star.se);  // E = 1
    // phi_{W*}(t) = 1/(1+t) exactly.
    for (double t : {0.5, 1.0, 2.0}) {
        std::vector<double> e(star.size());
        for (std::size_t i = 0; i < star.size(); ++i) e[i] = std::exp(-t * star[i]);
        MeanVar mv = summarize(e);
        CHECK(std::fabs(mv.mean - 1.0 / (1.0 + t)) < 4.0 * mv.se);
    }
}

TEST_CASE("connection-time limit M and its logarithm Lambda") {
    DegreeDistribution d = DegreeDistribution::explicit_pmf({{2, 0.5}, {3, 0.5}});
    LimitLawSamplers s(d);  // mu = 2.5, nu = 1.6
    const double m_mean = 2.5 / 0.6;
    RngStream rng(0x11110003);
    constexpr long long kDraws = 30000;
    std::vector<double> m(kDraws), lam(kDraws);
    for (long long i = 0; i < kDraws; ++i) {
        m[static_cast<std::size_t>(i)] = sample_M(s, rng);
        lam[static_cast<std::size_t>(i)] = sample_Lambda(s, rng);
    }
    MeanVar mv = summarize(m);
    CHECK(std::fabs(mv.mean - m_mean) < 4.0 * mv.se);
    KsResult ks_m = ks_one_sample(
        m, [m_mean](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / m_mean); });
    CHECK(ks_m.p_value > 1e-4);

    // Lambda = log(standard exponential): CDF 1 - exp(-e^x), mean -gamma_E.
    MeanVar mv_l = summarize(lam);
    CHECK(std::fabs(mv_l.mean + kEulerMascheroni) < 4.0 * mv_l.se);
    KsResult ks_l = ks_one_sample(lam, [](double x) { return 1.0 - std::exp(-std::exp(x)); });
    INFO("Lambda KS = ", ks_l.statistic, " p = ", ks_l.p_value);
    CHECK(ks_l.p_value > 1e-4);
}

TEST_CASE("V composition arithmetic") {
    DegreeDistribution d = DegreeDistribution::explicit_pmf({{2, 0.5}, {3, 0.5}});
    LimitLawSamplers s(d);
    const double nu1 = 0.6, mu = 2.5;
    // At w1 = w2 = 1 and m = mu/(nu-1), Lambda vanishes.
    CHECK(compose_V_tau_gt3(s, 1.0, 1.0, mu / nu1) ==
          doctest::Approx(std::log(mu * nu1) / nu1).epsilon(1e-12));
    CHECK(compose_V_tau_gt3(s, std::exp(1.0), 1.0, mu / nu1) ==
          doctest::Approx((std::log(mu * nu1) - 1.0) / nu1).epsilon(1e-12));
    CHECK_THROWS_AS(compose_V_tau_gt3(s, 0.0, 1.0, 1.0), InvalidParameterError);
    CHECK_THROWS_AS(compose_V_tau_gt3(s, 1.0, 1.0, -1.0), InvalidParameterError);
}

TEST_CASE("V has the exact mean implied by the Yule closed forms") {
    // nu - 1 = 1, so V = -log W1 - log W2 + Lambda + log(mu (nu-1)) with
    // E[log W] = psi(3) = 3/2 - gamma_E and E[Lambda] = -gamma_E, giving
    // E[V] = -3 + gamma_E + log 3.
    LimitLawSamplers s(yule_dist(), 10000);
    RngStream rng(0x11110004);
    constexpr long long kDraws = 4000;
    std::vector<double> v(kDraws);
    for (long long i = 0; i < kDraws; ++i)
        v[static_cast<std::size_t>(i)] = sample_V_tau_gt3(s, rng);
    MeanVar mv = summarize(v);
    double target = -3.0 + kEulerMascheroni + std::log(3.0);
    INFO("mean = ", mv.mean, " target = ", target, " se = ", mv.se);
    CHECK(std::fabs(mv.mean - target) < 4.0 * mv.se);
}

TEST_CASE("one-generation decomposition of W matches direct sampling") {
    DegreeDistribution d = DegreeDistribution::explicit_pmf({{2, 0.5}, {3, 0.5}});
    LimitLawSamplers s(d, 2000);
    const double nu1 = s.nu() - 1.0;
    RngStream rng(0x11110005);
    constexpr long long kDraws = 3000;
    std::vector<double> direct(kDraws), composed(kDraws);
    for (long long i = 0; i < kDraws; ++i)
        direct[static_cast<std::size_t>(i)] = sample_W(s, rng);
    for (long long i = 0; i < kDraws; ++i) {
        long long deg = s.dist.sample(rng);
        double total = 0.0;
        for (long long j = 0; j < deg; ++j)
            total += std::exp(-nu1 * rng.exponential()) * sample_W_subtree(s, rng);
        composed[static_cast<std::size_t>(i)] = total;
    }
    KsResult ks = ks_two_sample(direct, composed);
    INFO("KS = ", ks.statistic, " p = ", ks.p_value);
    CHECK(ks.p_value > 1e-3);
}

TEST_CASE("Laplace inversion reproduces the Yule transform exactly") {
    LimitLawSamplers s(yule_dist(), 15000);
    s.laplace_samples = 30000;
    RngStream rng(0x11110006);
    LaplaceCheckResult res = laplace_check(s, {0.5, 1.0, 2.0}, rng);
    REQUIRE(res.points.size() == 3);
    for (const LaplaceCheckPoint& p : res.points) {
        CHECK(p.phi_numeric == doctest::Approx(1.0 / (1.0 + p.t)).epsilon(5e-4));
        CHECK(std::fabs(p.phi_numeric - p.phi_empirical) <= 4.0 * p.empirical_se);
        CHECK(res.max_discrepancy >= std::fabs(p.phi_numeric - p.phi_empirical) - 1e-15);
    }
}

TEST_CASE("Laplace inversion input guards") {
    LimitLawSamplers heavy(DegreeDistribution::discrete_pareto(4.0));
    RngStream rng(0x11110007);
    CHECK_THROWS_AS(laplace_check(heavy, {1.0}, rng), InvalidParameterError);
    LimitLawSamplers s(yule_dist());
    CHECK_THROWS_AS(laplace_check(s, {}, rng), EmptyInputError);
    CHECK_THROWS_AS(laplace_check(s, {-1.0}, rng), InvalidParameterError);
}

TEST_CASE("explosion-time sampler for the heavy-tail regime") {
    LimitLawSamplers s(DegreeDistribution::discrete_pareto(2.5));
    s.x_tail_target = 1e-4;  // keep the unit test fast; the bound is recorded
    RngStream rng(0x11110008);
    for (int i = 0; i < 400; ++i) {
        XSampleInfo info;
        double x = sample_X(s, rng, &info);
        CHECK(x > 0.0);
        CHECK(std::isfinite(x));
        CHECK(info.truncation_index >= 1);
        CHECK(info.tail_bound <= 1e-4);
    }
    LimitLawSamplers finite(yule_dist());
    CHECK_THROWS_AS(sample_X(finite, rng), FiniteNuMisuseError);
}

}  // TEST_SUITE
