// rng.hpp: seeded randomness with counter-split substreams.
//
// Every stochastic routine takes an explicit stream. Ensemble members draw from
// substream(master_seed, index), so results do not depend on thread scheduling
// or on how work is partitioned. Gaussian deviates are produced by an explicit
// Box-Muller transform rather than std::normal_distribution, whose output is
// implementation-defined; this keeps emitted bytes identical across toolchains.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace decolab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent generator for ensemble member `index` of a run seeded by `seed`.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

// Uniform double in (0, 1], all 53 mantissa bits, reproducible bit-for-bit.
inline double uniform_unit(std::mt19937_64& g) {
    return static_cast<double>((g() >> 11) + 1) * 0x1p-53;
}

// Uniform double in [lo, hi).
inline double uniform_in(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1p-53);
}

// Standard normal deviate via Box-Muller.
inline double normal_unit(std::mt19937_64& g) {
    const double u1 = uniform_unit(g);
    const double u2 = uniform_unit(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace decolab
