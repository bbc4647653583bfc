// rng.hpp - seed derivation and complex Gaussian draws
//
// Monte Carlo trials are parallelized by deriving an independent stream
// per (point, trial) pair from the master seed, so results do not depend
// on the number of worker threads.

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace hstsim {

// splitmix64 finalizer; good enough to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point_index,
                                 std::uint64_t trial_index) {
    return mix64(mix64(master ^ mix64(point_index + 1)) ^ mix64(trial_index + 1));
}

// Circular complex Gaussian with E|z|^2 = 1.
inline std::complex<double> complex_gaussian(std::mt19937_64& rng) {
    static constexpr double inv_sqrt2 = 0.70710678118654752440;
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng) * inv_sqrt2, n(rng) * inv_sqrt2};
}

} // namespace hstsim
