// Deterministic random number generation for simulations.
//
// We deliberately avoid std::*_distribution: their output sequences are
// implementation-defined, and the experiment runner promises byte-identical
// CSV output for a given master seed on any platform/worker count. Everything
// here is pinned down to exact integer/double semantics.
//
// Generator: xoshiro256++ (Blackman & Vigna, public domain), seeded through
// splitmix64 as its authors recommend.
#pragma once

#include <cmath>
#include <cstdint>

namespace fpcm {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless avalanche mix (the splitmix64 finalizer). Used for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RngStream {
  public:
    RngStream() : RngStream(0) {}

    explicit RngStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on (0, 1]: 53-bit mantissa, never returns 0, so -log() is safe.
    double uniform01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform on [0, 1): convenient for inverse-CDF lookups.
    double uniform01_open() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard exponential via inversion; uniform01() is in (0,1] so the log
    // is finite and the result is >= 0.
    double exponential() { return -std::log(uniform01()); }

    bool bernoulli(double p) { return uniform01_open() < p; }

    // Uniform integer in [0, n). Lemire's multiply-shift with rejection:
    // exactly uniform, typically one multiplication per draw. n must be > 0.
    std::uint64_t bounded(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Counter-based stream derivation: each replicate gets an independent stream
// keyed by (master_seed, n, replicate, purpose), so results do not depend on
// scheduling or worker count. Sequential absorption through the avalanche mix.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b, std::uint64_t purpose) {
    std::uint64_t h = mix64(master ^ 0x8f462907eb2b29e5ULL);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ purpose);
    return h;
}

}  // namespace fpcm
