// Exception types shared across the library. Data-path "soft failures"
// (discarded replicates, unreached targets) are reported through result
// structs instead; exceptions are for misuse and invalid configuration.
#pragma once

#include <stdexcept>
#include <string>

namespace fpcm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter outside the supported range (e.g. pareto exponent <= 2).
struct InvalidParameterError : Error {
    using Error::Error;
};

// Asymptotic constants are undefined exactly at tau = 3.
struct CriticalTauError : Error {
    using Error::Error;
};

// nu <= 1: branching approximation dies out, limit objects degenerate.
struct DegenerateDistributionError : Error {
    using Error::Error;
};

// Operation requires E[D(D-1)]/E[D] < infinity (tau > 3 regime).
struct InfiniteNuError : Error {
    using Error::Error;
};

// Operation requires the infinite-variance regime (tau in (2,3)).
struct FiniteNuMisuseError : Error {
    using Error::Error;
};

// Flow construction ran out of alive vertices before the requested step.
struct DeadProcessError : Error {
    using Error::Error;
};

// Stub total of a degree sequence is odd (only possible when the parity fix
// was bypassed by hand-built input).
struct OddStubTotalError : Error {
    using Error::Error;
};

struct EmptyInputError : Error {
    using Error::Error;
};

// Aggregation asked for on fewer grid points / replicates than required.
struct InsufficientDataError : Error {
    using Error::Error;
};

// Adaptive quadrature failed to reach the requested tolerance.
struct IntegrationFailureError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace fpcm
