#pragma once

#include <cstdint>
#include <random>

namespace sublog {

/// splitmix64 step; used to derive independent seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic sub-seed for a named stream, e.g. one per (n, array).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = base;
    std::uint64_t m = splitmix64(s);
    s ^= a * 0xff51afd7ed558ccdULL + 0x2545f4914f6cdd1dULL;
    m ^= splitmix64(s);
    s ^= b * 0xc4ceb9fe1a85ec53ULL + 0x9e3779b97f4a7c15ULL;
    m ^= splitmix64(s);
    return m;
}

/// Uniform double in [0, 1) from the top 53 bits; avoids the
/// implementation-defined std::uniform_real_distribution.
inline double next_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    std::uint64_t s = seed;
    return std::mt19937_64(splitmix64(s));
}

}  // namespace sublog
