#pragma once

#include <cstdint>
#include <random>

namespace qinterp {

// splitmix64; used to whiten user seeds and to derive child seeds.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based seed split: child streams are independent of evaluation
// order, so parallel sampling over gate/trial indices stays reproducible.
inline uint64_t split_seed(uint64_t seed, uint64_t index) {
    return mix64(seed ^ mix64(index + 0x543210fedcba9876ULL));
}

inline std::mt19937_64 make_engine(uint64_t seed) {
    return std::mt19937_64(mix64(seed));
}

// Canonical double in [0,1) from the top 53 bits; avoids the
// implementation-defined behaviour of std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform phase in [0, 2*pi).
double uniform_phase(std::mt19937_64& eng);

// Standard normal via Box-Muller.
double standard_normal(std::mt19937_64& eng);

}  // namespace qinterp
