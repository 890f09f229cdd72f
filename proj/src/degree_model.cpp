#include "fpcm/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fpcm {

namespace {

constexpr long long kEulerMaclaurinCutoff = 32768;

// Euler-Maclaurin tail for Sum_{k >= from} k^(-s), valid once `from` is large.
double power_tail_em(double s, double from) {
    const double k1 = std::pow(from, -s);
    return std::pow(from, 1.0 - s) / (s - 1.0) + 0.5 * k1 +
           s * k1 / from / 12.0 -
           s * (s + 1.0) * (s + 2.0) * k1 / std::pow(from, 3.0) / 720.0 +
           s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * k1 /
               std::pow(from, 5.0) / 30240.0;
}

}  // namespace

double tail_power_sum(double s, long long from) {
    if (s <= 1.0) throw InvalidParameterError("tail_power_sum: requires s > 1");
    if (from < 1) throw InvalidParameterError("tail_power_sum: requires from >= 1");
    if (from >= kEulerMaclaurinCutoff) {
        return power_tail_em(s, static_cast<double>(from));
    }
    double acc = 0.0;
    for (long long k = from; k < kEulerMaclaurinCutoff; ++k) {
        acc += std::pow(static_cast<double>(k), -s);
    }
    return acc + power_tail_em(s, static_cast<double>(kEulerMaclaurinCutoff));
}

DegreeDistribution DegreeDistribution::discrete_pareto(double tau) {
    if (!(tau > 2.0)) {
        throw InvalidParameterError("discrete_pareto: requires tau > 2 for a finite mean");
    }
    DegreeDistribution d;
    d.kind_ = Kind::DiscretePareto;
    d.tau_ = tau;
    d.min_degree_ = 2;
    // E[D] = Sum_{k>=1} P(D >= k) = 1 + Sum_{k>=2} (2/k)^(tau-1).
    d.mu_ = 1.0 + std::pow(2.0, tau - 1.0) * tail_power_sum(tau - 1.0, 2);
    if (tau > 3.0) {
        // E[D(D-1)] = Sum_{k>=2} 2(k-1) P(D >= k)  (Abel summation)
        //           = 2^tau [ Sum_{k>=2} k^(2-tau) - Sum_{k>=2} k^(1-tau) ].
        const double second = std::pow(2.0, tau) *
                              (tail_power_sum(tau - 2.0, 2) - tail_power_sum(tau - 1.0, 2));
        d.nu_ = second / d.mu_;
    }
    return d;
}

DegreeDistribution DegreeDistribution::explicit_pmf(const std::map<long long, double>& pmf,
                                                    bool allow_degree_one) {
    if (pmf.empty()) throw InvalidParameterError("explicit_pmf: empty table");
    const long long lo = pmf.begin()->first;
    const long long hi = pmf.rbegin()->first;
    const long long min_allowed = allow_degree_one ? 1 : 2;
    if (lo < min_allowed) {
        throw InvalidParameterError("explicit_pmf: degrees below the minimum of 2");
    }
    DegreeDistribution d;
    d.kind_ = Kind::Explicit;
    d.min_degree_ = lo;
    d.max_degree_ = hi;
    d.probs_.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    double total = 0.0, mean = 0.0, second = 0.0;
    for (const auto& [k, p] : pmf) {
        if (p < 0.0) throw InvalidParameterError("explicit_pmf: negative probability");
        d.probs_[static_cast<std::size_t>(k - lo)] = p;
        total += p;
        mean += p * static_cast<double>(k);
        second += p * static_cast<double>(k) * static_cast<double>(k - 1);
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InvalidParameterError("explicit_pmf: probabilities sum to " + std::to_string(total));
    }
    d.cum_.resize(d.probs_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < d.probs_.size(); ++i) {
        run += d.probs_[i];
        d.cum_[i] = run;
    }
    d.cum_.back() = 1.0;
    d.mu_ = mean;
    d.nu_ = second / mean;
    return d;
}

double DegreeDistribution::tau() const {
    if (kind_ != Kind::DiscretePareto) {
        throw InvalidParameterError("tau(): not a pareto distribution");
    }
    return tau_;
}

double DegreeDistribution::survival(long long k) const {
    if (k <= min_degree_) return 1.0;
    if (kind_ == Kind::DiscretePareto) {
        return std::pow(2.0 / static_cast<double>(k), tau_ - 1.0);
    }
    if (k > max_degree_) return 0.0;
    // P(D >= k) = 1 - P(D <= k-1)
    return 1.0 - cum_[static_cast<std::size_t>(k - 1 - min_degree_)];
}

double DegreeDistribution::pmf(long long k) const {
    if (k < min_degree_) return 0.0;
    if (kind_ == Kind::DiscretePareto) {
        return survival(k) - survival(k + 1);
    }
    if (k > max_degree_) return 0.0;
    return probs_[static_cast<std::size_t>(k - min_degree_)];
}

long long DegreeDistribution::sample(RngStream& rng) const {
    if (kind_ == Kind::DiscretePareto) {
        // Inversion of the survival function: with U uniform on (0,1],
        // D = floor(2 U^(-1/(tau-1))) satisfies P(D >= k) = (2/k)^(tau-1).
        // U >= 2^-53 bounds the result by 2^(1 + 53/(tau-1)), well inside
        // int64 for tau > 2.1; the max() guards rounding at U near 1.
        const double u = rng.uniform01();
        const double x = 2.0 * std::pow(u, -1.0 / (tau_ - 1.0));
        return std::max<long long>(2, static_cast<long long>(x));
    }
    const double u = rng.uniform01_open();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    return min_degree_ + static_cast<long long>(it - cum_.begin());
}

std::string DegreeDistribution::describe() const {
    std::ostringstream out;
    if (kind_ == Kind::DiscretePareto) {
        out << "pareto(" << tau_ << ")";
        return out.str();
    }
    out << "explicit(";
    bool first = true;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] == 0.0) continue;
        if (!first) out << ";";
        out << (min_degree_ + static_cast<long long>(i)) << ":" << probs_[i];
        first = false;
    }
    out << ")";
    return out.str();
}

SizeBiasedDistribution::SizeBiasedDistribution(const DegreeDistribution& source)
    : source_(source) {
    if (source_.min_degree() < 2) {
        throw InvalidParameterError(
            "SizeBiasedDistribution: source must have minimum degree >= 2");
    }
    // Cumulative table for inversion sampling. For heavy tails the table is
    // capped and draws beyond it fall back to the closed-form survival.
    constexpr long long kTableCap = 65536;
    constexpr double kTableTailStop = 1e-16;
    long long hi = kTableCap;
    if (source_.kind() == DegreeDistribution::Kind::Explicit) {
        // Full support fits: B = D - 1 on the explicit table.
        hi = std::max<long long>(1, source_.min_degree() - 1);
        while (source_.pmf(hi + 2) > 0.0 || source_.survival(hi + 2) > 0.0) ++hi;
    }
    const double mu = source_.mean();
    cum_.reserve(static_cast<std::size_t>(std::min<long long>(hi, kTableCap)));
    double run = 0.0;
    long long j = 0;
    while (j < hi) {
        ++j;
        run += static_cast<double>(j + 1) * source_.pmf(j + 1) / mu;
        cum_.push_back(std::min(run, 1.0));
        if (1.0 - run < kTableTailStop) break;
    }
    table_max_ = j;
    if (source_.kind() == DegreeDistribution::Kind::Explicit) cum_.back() = 1.0;
}

double SizeBiasedDistribution::pmf(long long j) const {
    if (j < 1) return 0.0;
    return static_cast<double>(j + 1) * source_.pmf(j + 1) / source_.mean();
}

double SizeBiasedDistribution::survival(long long j) const {
    if (j <= 1) return 1.0;
    // E[D 1{D >= j+1}] = (j+1) P(D >= j+1) + Sum_{k >= j+2} P(D >= k).
    if (source_.kind() == DegreeDistribution::Kind::DiscretePareto) {
        const double t = source_.tau() - 1.0;
        const double head = std::pow(2.0, t) * std::pow(static_cast<double>(j + 1), 1.0 - t);
        const double tail = std::pow(2.0, t) * tail_power_sum(t, j + 2);
        return (head + tail) / source_.mean();
    }
    double acc = static_cast<double>(j + 1) * source_.survival(j + 1);
    for (long long k = j + 2; source_.survival(k) > 0.0; ++k) acc += source_.survival(k);
    return acc / source_.mean();
}

long long SizeBiasedDistribution::sample(RngStream& rng) const {
    const double u = rng.uniform01_open();
    // Two-level lookup: a short linear scan catches the bulk of the mass,
    // binary search covers the rest of the table, and the closed-form
    // survival handles draws beyond the table (heavy-tail regime only).
    constexpr std::size_t kLinear = 16;
    const std::size_t scan = std::min(kLinear, cum_.size());
    for (std::size_t i = 0; i < scan; ++i) {
        if (u < cum_[i]) return static_cast<long long>(i) + 1;
    }
    if (u < cum_.back()) {
        const auto it = std::upper_bound(cum_.begin() + scan, cum_.end(), u);
        return static_cast<long long>(it - cum_.begin()) + 1;
    }
    return sample_tail(1.0 - u);
}

long long SizeBiasedDistribution::sample_tail(double target_survival) const {
    // Smallest j > table_max_ with P(B >= j+1) < target survival; exponential
    // bracketing then bisection, each probe a closed-form evaluation.
    long long lo = table_max_ + 1;  // survival(lo+1) >= target by construction
    long long hi = lo;
    while (survival(hi + 1) >= target_survival) {
        lo = hi;
        hi *= 2;
        if (hi > (1LL << 60)) break;
    }
    while (lo + 1 < hi) {
        const long long mid = lo + (hi - lo) / 2;
        if (survival(mid + 1) >= target_survival) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return survival(lo + 1) < target_survival ? lo : hi;
}

}  // namespace fpcm
