#pragma once

#include <cstdint>
#include <string_view>

namespace txnembed::rng {

/// splitmix64 step; the standard 64-bit mixer.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Per-module seed derivation: every module draws its randomness from the
/// single global seed through this function, so sub-results are independently
/// reproducible. derive(seed, "msda") is stable across runs and platforms.
inline uint64_t derive(uint64_t global_seed, std::string_view module_name) {
    uint64_t s = global_seed ^ fnv1a(module_name);
    return splitmix64(s);
}

/// Per-stream seed derivation for parallel generation (e.g. one stream per
/// client); derive_stream(seed, i) never collides with derive_stream(seed, j)
/// for i != j in practice.
inline uint64_t derive_stream(uint64_t seed, uint64_t stream) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    return splitmix64(s);
}

/// Small deterministic generator (xoshiro-free: plain splitmix64 chain) used
/// everywhere instead of std:: distributions, whose output is
/// implementation-defined.
class Engine {
public:
    explicit Engine(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1): 53 mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    uint64_t uniform_below(uint64_t n) {
        // Rejection-free modulo is biased for huge n; n here is far below 2^63.
        return next_u64() % n;
    }

    /// Standard normal via Box-Muller (no cached spare; deterministic).
    double normal();

private:
    uint64_t state_;
};

}  // namespace txnembed::rng
