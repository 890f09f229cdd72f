// Degree laws for the configuration model and their size-biased companions.
//
// Two families are supported, both with minimum degree 2:
//   - DiscretePareto(tau): P(D >= k) = (2/k)^(tau-1) for k >= 2. Power-law
//     tail with exponent tau - 1; E[D] is finite for tau > 2 and
//     E[D(D-1)] is finite only for tau > 3.
//   - Explicit: a finite probability table {degree -> probability}.
//
// The size-biased forward law g(j) = (j+1) f(j+1) / E[D] describes the number
// of offspring stubs seen when an edge is traversed into a vertex; its mean is
// nu = E[D(D-1)] / E[D], the growth factor of the exploration process.
#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fpcm/errors.hpp"
#include "fpcm/rng.hpp"

namespace fpcm {

// Sum_{k >= from} k^(-s) for s > 1; direct summation plus an Euler-Maclaurin
// tail, accurate to ~1e-18 relative for s in (1, 8].
double tail_power_sum(double s, long long from);

class DegreeDistribution {
  public:
    enum class Kind { DiscretePareto, Explicit };

    // Requires tau > 2 (finite mean); tau == 3 is allowed here but has
    // infinite nu and no defined asymptotic constants.
    static DegreeDistribution discrete_pareto(double tau);

    // Probabilities must sum to 1 within 1e-12. Degrees must be >= 2 unless
    // allow_degree_one is set (only test harnesses use that escape hatch).
    static DegreeDistribution explicit_pmf(const std::map<long long, double>& pmf,
                                           bool allow_degree_one = false);

    Kind kind() const { return kind_; }
    double tau() const;  // DiscretePareto only.

    double pmf(long long k) const;       // P(D = k)
    double survival(long long k) const;  // P(D >= k)
    long long sample(RngStream& rng) const;

    long long min_degree() const { return min_degree_; }
    // Largest degree with positive probability; -1 for unbounded support.
    long long max_degree() const { return max_degree_; }
    double mean() const { return mu_; }  // mu = E[D]

    bool has_finite_forward_mean() const {
        return nu_ != std::numeric_limits<double>::infinity();
    }
    // nu = E[D(D-1)] / E[D]; +infinity when tau <= 3.
    double forward_mean() const { return nu_; }
    // nu <= 1: the exploration process does not grow.
    bool degenerate() const { return nu_ <= 1.0 + 1e-12; }

    // Compact single-token description, safe for CSV fields (no commas or
    // spaces), e.g. "pareto(2.5)" or "explicit(2:0.5;3:0.5)".
    std::string describe() const;

  private:
    DegreeDistribution() = default;

    Kind kind_ = Kind::DiscretePareto;
    double tau_ = 0.0;
    long long min_degree_ = 2;
    long long max_degree_ = -1;    // Explicit only; -1 means unbounded.
    std::vector<double> probs_;    // Explicit: probs_[i] = P(D = min_degree_ + i)
    std::vector<double> cum_;      // Explicit: running sums of probs_
    double mu_ = 0.0;
    double nu_ = std::numeric_limits<double>::infinity();
};

class SizeBiasedDistribution {
  public:
    explicit SizeBiasedDistribution(const DegreeDistribution& source);

    double pmf(long long j) const;       // P(B = j), support j >= 1
    double survival(long long j) const;  // P(B >= j) = E[D 1{D >= j+1}] / E[D]
    long long sample(RngStream& rng) const;

    // E[B] = nu; +infinity in the heavy-tail regime.
    double mean() const { return source_.forward_mean(); }
    const DegreeDistribution& source() const { return source_; }

  private:
    long long sample_tail(double target_survival) const;

    DegreeDistribution source_;
    std::vector<double> cum_;  // cum_[i] = P(B <= 1 + i)
    long long table_max_ = 0;  // largest j covered by cum_
};

}  // namespace fpcm
